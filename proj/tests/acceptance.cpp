// Acceptance gate: every numbered check prints one [PASS]/[FAIL] line with a
// short numeric summary; the exit status is the number of failed checks.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bt/cpn.hpp"
#include "bt/experiments.hpp"
#include "bt/fbi.hpp"
#include "bt/fock.hpp"
#include "bt/multi_index.hpp"
#include "bt/parallel.hpp"
#include "bt/quad.hpp"
#include "bt/special_fn.hpp"
#include "bt/spectral.hpp"

using namespace bt;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

std::string fixed4(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

// C1: closed-form norms against the quadrature/sup oracles on Bargmann space.
Outcome c01() {
    std::vector<std::tuple<int, int, MultiIndex>> cells;
    for (int n : {1, 2})
        for (int N : {1, 4, 16})
            for (const auto& nu : indices_with_entries_up_to(n, 8)) cells.emplace_back(n, N, nu);

    const std::vector<LpExponent> ps = {LpExponent::finite(2.0), LpExponent::finite(3.0),
                                        LpExponent::finite(4.0), LpExponent::finite(7.5),
                                        LpExponent::infinity()};
    std::vector<double> worst(cells.size(), 0.0);
    parallel_for(int(cells.size()), [&](int i) {
        auto [n, N, nu] = cells[i];
        fock::FockParams pr{n, N};
        quad::BasisDescriptor d{quad::BasisDescriptor::Space::fock, n, N, nu};
        double w = 0.0;
        for (const auto& p : ps) {
            double closed = fock::fock_lp_norm_closed(pr, nu, p).log_abs();
            double oracle = p.is_infinity()
                                ? quad::sup_norm_search(d).log_value
                                : std::log(quad::lp_norm_quadrature(d, p.value()));
            w = std::max(w, std::abs(std::expm1(closed - oracle)));
        }
        worst[i] = w;
    });
    double m = max_of(worst);
    return {m <= 1e-6, "max rel " + sci(m) + " over " + std::to_string(cells.size() * ps.size()) +
                           " (state, p) pairs"};
}

// C2: p = 2 norms exactly 1 on both spaces.
Outcome c02() {
    double worst = 0.0;
    auto p2 = LpExponent::finite(2.0);
    for (int n : {1, 2})
        for (int N : {1, 4, 16})
            for (const auto& nu : indices_with_entries_up_to(n, 8)) {
                fock::FockParams pr{n, N};
                worst = std::max(worst, std::abs(fock::fock_lp_norm_closed(pr, nu, p2).log_abs()));
            }
    for (int n : {1, 2, 3})
        for (int N = 1; N <= 200; ++N)
            for (int a1 = 0; a1 <= N; ++a1) {
                cpn::CPnParams pr{n, N};
                worst = std::max(worst, std::abs(cpn::cpn_lp_norm_closed(pr, a1, p2).log_abs()));
            }
    return {worst <= 1e-12, "max |ln norm| " + sci(worst)};
}

// C3: the quadratic-radius symbol is exactly diagonal with the model spectrum.
Outcome c03() {
    bool ok = true;
    std::string note = "all off-diagonals exactly 0";
    double diag_err = 0.0;
    for (int n : {1, 2, 3}) {
        int kmax = n == 3 ? 5 : 6;
        std::vector<spectral::MonomialTerm> symbol;
        for (int j = 0; j < n; ++j) {
            MultiIndex e(n, 0);
            e[j] = 1;
            symbol.push_back({1.0, e, e});
        }
        for (int N = 1; N <= 20; ++N) {
            fock::FockParams pr{n, N};
            auto bm = spectral::fock_build_matrix(pr, symbol, kmax);
            int dim = int(bm.basis.size());
            std::vector<long long> count(kmax + 1, 0);
            for (int i = 0; i < dim; ++i) {
                int k = order(bm.basis[i]);
                count[k]++;
                double expect = double(k + n) / N;
                diag_err = std::max(diag_err, std::abs(bm.mat(i, i) / expect - 1.0));
                for (int j = 0; j < dim; ++j)
                    if (i != j && bm.mat(i, j) != 0.0) {
                        ok = false;
                        note = "nonzero off-diagonal at n=" + std::to_string(n);
                    }
            }
            for (int k = 0; k <= kmax; ++k)
                if (count[k] != fock::harmonic_multiplicity(n, k)) {
                    ok = false;
                    note = "multiplicity mismatch at n=" + std::to_string(n) +
                           " k=" + std::to_string(k);
                }
        }
    }
    ok = ok && diag_err <= 1e-13;
    return {ok, note + ", max diag rel " + sci(diag_err)};
}

Outcome slope_experiment(const std::string& id, const std::vector<std::pair<int, int>>& n_alpha) {
    bool ok = true;
    std::ostringstream note;
    for (auto [n, alpha] : n_alpha) {
        auto cfg = expr::default_config(id);
        cfg.n = n;
        cfg.alpha = alpha;
        auto rep = expr::run_experiment(cfg);
        ok = ok && rep.pass;
        for (const auto& f : rep.fits) {
            note << " n" << n;
            if (id == "fock-nu-k") note << "a" << alpha;
            note << "/p" << f["p"].get<std::string>() << ":" << fixed4(f["slope"].get<double>())
                 << "(want " << fixed4(f["target"].get<double>()) << ")";
        }
    }
    return {ok, "slopes" + note.str()};
}

// C6: exhaustive ratio bound at total degree 20.
Outcome c06() {
    bool ok = true;
    double max_gap = -1e300;
    long long checked = 0;
    for (int n : {1, 2, 3}) {
        fock::FockParams pr{n, 7};
        for (const auto& p :
             {LpExponent::finite(2.0), LpExponent::finite(4.0), LpExponent::infinity()}) {
            for (const auto& nu : indices_of_order(n, 20)) {
                auto rb = fock::sharpness_ratio_bound(pr, nu, p);
                ok = ok && rb.holds;
                max_gap = std::max(max_gap, rb.ratio.log_abs() - rb.bound_log);
                ++checked;
            }
        }
    }
    return {ok, std::to_string(checked) + " indices, max log(ratio/bound) " + sci(max_gap)};
}

// C7: integer log-convexity of the envelope profiles.
Outcome c07() {
    double worst = 1e300;
    for (double p : {2.0, 4.0, 10.0}) {
        auto rc = fock::log_convexity_check(p, 200);
        worst = std::min(worst, std::min(rc.min_finite, rc.min_inf));
    }
    return {worst >= -1e-12, "min second difference " + sci(worst)};
}

// C8: chart moment integral against adaptive quadrature.
Outcome c08() {
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-12;

    double worst1 = 0.0;
    for (int a = 0; a <= 10; ++a) {
        for (int b = a; b <= 20; ++b) {
            auto r = quad::integrate_half_line(
                [&](double t) {
                    return std::pow(t, 2 * a + 1) * std::pow(1.0 + t * t, -double(b + 2));
                },
                1.0 + std::sqrt(double(a)), spec);
            double closed = cpn::lcalcul_integral({a}, b).value();
            worst1 = std::max(worst1, std::abs(r.value / closed - 1.0));
        }
    }

    std::vector<std::tuple<int, int, int>> cells;
    for (int a1 = 0; a1 <= 6; ++a1)
        for (int a2 = 0; a1 + a2 <= 6; ++a2)
            for (int b = a1 + a2; b <= 12; ++b) cells.emplace_back(a1, a2, b);
    std::vector<double> dev(cells.size(), 0.0);
    parallel_for(int(cells.size()), [&](int i) {
        auto [a1, a2, b] = cells[i];
        quad::QuadratureSpec s2;
        s2.rel_tol = 1e-11;
        s2.abs_floor = 1e-28;  // closed values reach 7e-8; the default floor is too lax
        auto outer = quad::integrate_half_line(
            [&](double r1) {
                // The inner integral shrinks like (1+r1^2)^{-(b+2-a2)}; keep its
                // absolute floor proportional so the tail stays accurate in the
                // relative sense the outer integrand needs.
                quad::QuadratureSpec si = s2;
                si.abs_floor = 1e-18 * std::pow(1.0 + r1 * r1, -double(b + 2 - a2));
                auto inner = quad::integrate_half_line(
                    [&](double r2) {
                        return std::pow(r2, 2 * a2 + 1) *
                               std::pow(1.0 + r1 * r1 + r2 * r2, -double(b + 3));
                    },
                    1.0 + std::sqrt(double(a2)), si);
                return std::pow(r1, 2 * a1 + 1) * inner.value;
            },
            1.0 + std::sqrt(double(a1)), s2);
        double closed = cpn::lcalcul_integral({a1, a2}, b).value();
        dev[i] = std::abs(outer.value / closed - 1.0);
    });
    double worst2 = max_of(dev);

    double spot = cpn::lcalcul_integral({1, 0}, 2).value();
    bool spot_ok = std::abs(spot * 96.0 - 1.0) <= 1e-13;
    bool ok = worst1 <= 1e-10 && worst2 <= 1e-8 && spot_ok;
    return {ok, "1d rel " + sci(worst1) + ", 2d rel " + sci(worst2) + ", spot 1/96 " +
                    (spot_ok ? "exact" : "WRONG")};
}

// C9: quadrature assembly of the height operator.
Outcome c09() {
    std::vector<std::pair<int, int>> cells;
    for (int n : {1, 2})
        for (int N = 1; N <= 8; ++N) cells.emplace_back(n, N);
    std::vector<double> off(cells.size()), diag(cells.size()), eig(cells.size());
    parallel_for(int(cells.size()), [&](int i) {
        auto [n, N] = cells[i];
        cpn::CPnParams pr{n, N};
        auto qd = spectral::cpn_build_matrix_quadrature(pr, 1);
        int dim = int(qd.basis.size());
        double o = 0.0, d = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c)
                if (r != c) o = std::max(o, std::abs(qd.mat(r, c)));
            double expect = double(qd.basis[r][0] + 1) / double(N + n + 1);
            d = std::max(d, std::abs(qd.mat(r, r) - expect));
        }
        off[i] = o;
        diag[i] = d;
        eig[i] = spectral::eigendecompose(qd.mat).values.back();
    });
    double mo = max_of(off), md = max_of(diag), me = max_of(eig);
    bool ok = mo <= 1e-8 && md <= 1e-8 && me <= 1.0 + 1e-10;
    return {ok, "max offdiag " + sci(mo) + ", max diag err " + sci(md) + ", max eigenvalue " +
                    fixed4(me)};
}

// C10: sharpness constants at N = 4000.
Outcome c10() {
    bool ok = true;
    std::ostringstream note;
    auto one = [&](int n, LpExponent p) {
        cpn::CPnParams pr{n, 4000};
        auto pred = cpn::cpn_asymptotic_prediction(n, p, 4000);
        double log_norm = p.is_infinity()
                              ? cpn::cpn_sup_norm_closed(pr, pred.index).value.log_abs()
                              : cpn::cpn_lp_norm_closed(pr, pred.index[0], p).log_abs();
        double ratio =
            std::exp(log_norm - pred.log_constant - pred.exponent * std::log(4000.0));
        ok = ok && std::abs(ratio - 1.0) <= 0.02;
        note << " n" << n << "/p" << p.str() << ":" << fixed4(ratio);
    };
    one(1, LpExponent::infinity());
    one(1, LpExponent::finite(4.0));
    one(2, LpExponent::finite(4.0));
    return {ok, "norm/prediction ratios" + note.str()};
}

// C11: window occupancy across the whole N range.
Outcome c11() {
    bool ok = true;
    int n10 = -1, min_count = 1 << 30;
    for (int N = 10; N <= 2000; ++N) {
        cpn::CPnParams pr{1, N};
        auto win = spectral::cpn_window(pr, 0.5, 1.0);
        int c = int(win.levels.size());
        min_count = std::min(min_count, c);
        if (N == 10) n10 = c;
        ok = ok && c >= 1;
    }
    ok = ok && n10 == 3;
    return {ok, "min count " + std::to_string(min_count) + ", N=10 count " + std::to_string(n10)};
}

Outcome report_experiment(const std::string& id, const std::string& summary_keys) {
    auto rep = expr::run_experiment(expr::default_config(id));
    std::ostringstream note;
    for (const auto& f : rep.fits) {
        for (auto it = f.begin(); it != f.end(); ++it) {
            if (summary_keys.find("|" + it.key() + "|") == std::string::npos) continue;
            note << " " << it.key() << "=";
            if (it.value().is_number())
                note << fixed4(it.value().get<double>());
            else
                note << it.value().dump();
        }
        note << ";";
    }
    return {rep.pass, note.str()};
}

// C15: isometry and weighted Cauchy-Riemann residuals for both transforms.
Outcome c15() {
    auto rep = expr::run_experiment(expr::default_config("fbi-isometry"));
    double dev = 0.0, dbar = 0.0;
    for (const auto& r : rep.rows) {
        dev = std::max(dev, r["norm_ratio_dev"].get<double>());
        dbar = std::max(dbar, r["dbar_residual"].get<double>());
    }
    return {rep.pass, "max |ratio-1| " + sci(dev) + ", max dbar residual " + sci(dbar)};
}

// C16: conjugated eigenvalue residuals shrink with N; ablation stays worse.
Outcome c16() {
    auto rep = expr::run_experiment(expr::default_config("fbi-conjugation"));
    std::ostringstream note;
    for (const auto& r : rep.rows) {
        note << " k" << r["k"].get<int>() << "/N" << r["N"].get<int>() << ":"
             << sci(r["corrected"].get<double>()) << "<" << sci(r["uncorrected"].get<double>());
    }
    return {rep.pass, "corrected<uncorrected" + note.str()};
}

// C17: byte-identical reports across thread counts.
Outcome c17() {
    bool ok = true;
    std::string bad;
    for (const auto& id : expr::experiment_ids()) {
        auto cfg = expr::reduced_config(id);
        setenv("BT_THREADS", "1", 1);
        auto s1 = expr::report_to_json(expr::run_experiment(cfg), false).dump(2);
        setenv("BT_THREADS", "8", 1);
        auto s8 = expr::report_to_json(expr::run_experiment(cfg), false).dump(2);
        unsetenv("BT_THREADS");
        if (s1 != s8) {
            ok = false;
            bad += " " + id;
        }
    }
    return {ok, ok ? "all 16 experiments byte-identical at 1 and 8 threads"
                   : "mismatch in" + bad};
}

}  // namespace

int main(int argc, char** argv) {
    struct Item {
        const char* label;
        Outcome (*run)();
    };

    // Optional arguments select criteria by number, e.g. "acceptance 8 12".
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    // Wrappers so every entry is a plain function pointer.
    static auto run_c04 = [] { return slope_experiment("fock-sharpness", {{1, 1}, {2, 1}, {3, 1}}); };
    static auto run_c05 = [] { return slope_experiment("fock-nu-k", {{2, 2}, {3, 2}, {3, 3}}); };
    static auto run_c12 = [] {
        return report_experiment("projector-diag", "|value|slope|target|ok|");
    };
    static auto run_c13 = [] { return report_experiment("quasimode-sup", "|slope|cap|ok|"); };
    static auto run_c14 = [] {
        return report_experiment("quasimode-concentration", "|rate|min_required|ok|");
    };

    const std::vector<Item> items = {
        {"closed-form vs quadrature norms, Bargmann", c01},
        {"p=2 normalization exact on both spaces", c02},
        {"quadratic-radius symbol: diagonal spectrum", c03},
        {"single-spike norm growth slopes", +[] { return run_c04(); }},
        {"repeated-entry family growth slopes", +[] { return run_c05(); }},
        {"degree-20 ratio bound, exhaustive", c06},
        {"envelope log-convexity", c07},
        {"chart moment integral vs quadrature", c08},
        {"height operator assembled by quadrature", c09},
        {"sharpness constants at N=4000", c10},
        {"spectral window occupancy, N in [10,2000]", c11},
        {"projector diagonal scaling", +[] { return run_c12(); }},
        {"quasimode sup growth", +[] { return run_c13(); }},
        {"quasimode shell concentration", +[] { return run_c14(); }},
        {"wave-packet transform isometry", c15},
        {"conjugated symbol eigenvalue", c16},
        {"thread-count determinism", c17},
    };

    int failures = 0;
    for (size_t i = 0; i < items.size(); ++i) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), int(i) + 1) == only.end())
            continue;
        Outcome out;
        try {
            out = items[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.ok) ++failures;
        std::ostringstream line;
        line << (out.ok ? "[PASS]" : "[FAIL]") << " C" << (i < 9 ? "0" : "") << (i + 1) << " "
             << items[i].label << ": " << out.detail;
        std::cout << line.str() << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures;
}
