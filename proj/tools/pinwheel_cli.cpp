// pinwheel: exact pinwheel calculus on the command line.  Subcommands wrap
// the header library: continued fractions and Wahl chains (hj), sweep
// verification of the structural identities (verify), base-diagram SVGs
// (diagram), embedding bounds (nonsqueeze, classify) and the floating-point
// local-model checks (verify-local).
//
// Exit codes: 0 success or all checks pass, 1 check failure or internal
// error, 2 usage error.  Output for a fixed command line is byte-stable;
// PINWHEEL_JOBS only changes scheduling, never bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <pinwheel/atf.hpp>
#include <pinwheel/chain_algebra.hpp>
#include <pinwheel/compactify.hpp>
#include <pinwheel/embeddings.hpp>
#include <pinwheel/hj.hpp>
#include <pinwheel/local_models.hpp>
#include <pinwheel/regulation.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

using json = nlohmann::ordered_json;
using namespace pinwheel;

namespace {

constexpr const char* kSchemaVersion = "pinwheel-report/1";
constexpr i64 kMaxSweepP = 500;

std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fmt_vec(const std::vector<i64>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

std::string pair_tag(i64 p, i64 q) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

// "a/b" with optional sign, or a bare integer.
Rational parse_rational(const std::string& s) {
    const auto parse_ll = [&](const std::string& t) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(t, &pos);
        } catch (const std::exception&) {
            throw std::domain_error("expected an integer or a/b, got '" + s + "'");
        }
        if (t.empty() || pos != t.size())
            throw std::domain_error("expected an integer or a/b, got '" + s + "'");
        return v;
    };
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_ll(s));
    return Rational::make(parse_ll(s.substr(0, slash)), parse_ll(s.substr(slash + 1)));
}

// A rational size, or "inf" for an open direction.
std::optional<Rational> parse_size(const std::string& s) {
    if (s == "inf") return std::nullopt;
    return parse_rational(s);
}

json qvec_json(const QVec2& v) { return json::array({v.x.to_string(), v.y.to_string()}); }
json ivec_json(const IntVec2& v) { return json::array({v.x, v.y}); }

// ---- check and report plumbing ----

struct Check {
    std::string name;
    bool pass = true;
    std::string witness; // set on failure only
};

void expect(std::vector<Check>& out, std::string name, bool ok, std::string witness) {
    out.push_back({std::move(name), ok, ok ? std::string() : std::move(witness)});
}

struct Report {
    std::string command;
    json inputs = json::object();
    json outputs = json::object();
    std::vector<Check> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    json to_json() const {
        json j;
        j["version"] = kSchemaVersion;
        j["command"] = command;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        json arr = json::array();
        for (const auto& c : checks) {
            json e;
            e["name"] = c.name;
            e["status"] = c.pass ? "pass" : "fail";
            if (!c.pass) e["witness"] = c.witness;
            arr.push_back(std::move(e));
        }
        j["checks"] = std::move(arr);
        return j;
    }
};

void print_json(const Report& r) { std::cout << r.to_json().dump(2) << "\n"; }

// ---- per-pair verification checks, one function per module ----

void checks_hj(i64 p, i64 q, std::vector<Check>& out) {
    const auto w = wahl_chain(p, q);
    const Rational value = Rational::make(i128(p) * p, i128(p) * q - 1);
    const auto ev = hj_evaluate(w.wahl);
    expect(out, "wahl-evaluates", ev.finite && ev.value == value,
           "chain evaluates to " + (ev.finite ? ev.value.to_string() : std::string("infinity")) +
               ", want " + value.to_string());
    const auto dual = wahl_dual_chain(p, q);
    const Rational dvalue = Rational::make(i128(p) * p, i128(p) * p - i128(p) * q + 1);
    const auto dev = hj_evaluate(dual);
    expect(out, "dual-evaluates", dev.finite && dev.value == dvalue,
           "dual evaluates to " + (dev.finite ? dev.value.to_string() : std::string("infinity")) +
               ", want " + dvalue.to_string());
    const auto m = cf_matrix_product(w.xs);
    const i64 inv = mod_inverse(q, p);
    const i128 dnum = 1 - i128(q) * inv;
    const bool ok = m.a == p && m.b == -inv && m.c == q && dnum % p == 0 &&
                    m.d == static_cast<i64>(dnum / p);
    expect(out, "matrix-identity", ok,
           "coefficient product gives [" + std::to_string(m.a) + "," + std::to_string(m.b) + ";" +
               std::to_string(m.c) + "," + std::to_string(m.d) + "]");
}

void checks_chain(i64 p, i64 q, std::vector<Check>& out) {
    const auto w = wahl_chain(p, q);
    const i64 n = checked_i64(i128(p) * p);
    const i64 a = checked_i64(i128(p) * q - 1);
    const auto acc = accompanying(n, a);
    const auto closed = inverse_closed_form(acc);
    const auto gauss =
        exact_inverse(intersection_matrix(chain_from_word(w.wahl, SphereChain::Role::wahl)));
    bool same = closed.rows == gauss.rows && closed.cols == gauss.cols;
    std::string where = same ? "" : "shape";
    for (std::size_t i = 0; same && i < closed.rows; ++i)
        for (std::size_t j = 0; same && j < closed.cols; ++j)
            if (closed.at(i, j) != gauss.at(i, j)) {
                same = false;
                where = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
    expect(out, "closed-form-inverse", same, "closed form disagrees with elimination at " + where);
    const auto ks = discrepancies(acc);
    bool in_range = true;
    std::string bad;
    for (std::size_t j = 0; j < ks.size() && in_range; ++j)
        if (!(ks[j] > Rational(-1) && ks[j] <= Rational(0))) {
            in_range = false;
            bad = "k_" + std::to_string(j + 1) + " = " + ks[j].to_string();
        }
    expect(out, "discrepancy-range", in_range, bad);
}

void checks_compactify(i64 p, i64 q, std::vector<Check>& out) {
    const auto c = compactifying_divisor(p, q);
    const auto inv = divisor_inverse(c);
    const Rational corner = Rational::make(i128(p) * q - 1, i128(p) * p);
    expect(out, "schur-top-left", inv.at(0, 0) == corner,
           "inverse corner entry is " + inv.at(0, 0).to_string() + ", want " + corner.to_string());
    const auto audit = schur_inverse_audit(c);
    expect(out, "schur-corrected", audit.corrected_matches,
           "sign-corrected Schur assembly does not reproduce the exact inverse");
    const auto bd = blowdown_to_hirzebruch(p, q);
    bool ok = bd.hirzebruch_degree == c.d0;
    if (q == 1)
        ok = ok && bd.states.empty();
    else
        ok = ok && !bd.states.empty() && bd.states.back() == std::vector<i64>{c.d0, 0};
    expect(out, "blowdown-degree", ok,
           "blow-down lands on degree " + std::to_string(bd.hirzebruch_degree) + ", want " +
               std::to_string(c.d0));
}

void checks_regulation(i64 p, i64 q, std::vector<Check>& out) {
    const auto uniq = verify_unique_intersection(p, q);
    expect(out, "unique-intersection", uniq.unique,
           std::to_string(uniq.admissible.size()) + " admissible classes over " +
               std::to_string(uniq.enumerated) + " candidates");
    const std::size_t m = wahl_chain(p, q).wahl.size();
    const std::size_t n = compactifying_divisor(p, q).n();
    const auto rs = broken_ruling_solve(make_basis(p, q));
    bool positive = rs.epsilon >= 1;
    for (i64 v : rs.alpha) positive = positive && v >= 1;
    for (i64 v : rs.beta) positive = positive && v >= 1;
    expect(out, "ruling-attachment", rs.r == m && rs.s == n && positive,
           "solver attaches at (" + std::to_string(rs.r) + "," + std::to_string(rs.s) +
               "), want (" + std::to_string(m) + "," + std::to_string(n) + ")");
    // The tail comparison degenerates at q = 1, where the chain has one sphere.
    if (q != 1)
        expect(out, "shared-accompanying", shared_accompanying_check(p, q),
               "tail fractions do not share an accompanying value");
    expect(out, "two-ruling-exclusion", two_ruling_exclusion(p, q),
           "a second ruling class survived the exclusion test");
    const auto tr = contraction_simulator(p, q);
    const bool ok = tr.steps == m + n - 1 && tr.c1_final == -tr.d0 && !tr.states.empty() &&
                    tr.states.back() == std::vector<i64>{0} && tr.betti == m + n + 1;
    expect(out, "contraction", ok,
           "trace runs " + std::to_string(tr.steps) + " steps to section " +
               std::to_string(tr.c1_final) + ", want " + std::to_string(m + n - 1) +
               " steps to " + std::to_string(-tr.d0));
}

void checks_embeddings(i64 p, i64 q, std::vector<Check>& out) {
    const Rational area = cm_area(p, q, Rational(1));
    const Rational coeff = cm_coefficient(p, q);
    expect(out, "obstruction-cancellation", area * coeff.abs() == Rational(1),
           "area " + area.to_string() + " times |" + coeff.to_string() + "| is not 1");
    NonsqueezeQuery nq;
    nq.p = p;
    nq.q = q;
    nq.alpha = Rational(1);
    nq.lambda = Rational(1);
    const auto v = nonsqueeze_verdict(nq);
    expect(out, "boundary-allowed", v.allowed && v.bound == Rational(1),
           "equal sizes must embed with bound 1, got bound " + v.bound.to_string());
    const auto cls = classify_pinwheels(p, q);
    const i64 lo = std::min(q, p - q), hi = std::max(q, p - q);
    std::vector<std::pair<i64, i64>> want{{p, lo}};
    if (hi != lo) want.push_back({p, hi});
    std::string got = "{";
    for (const auto& [cm, cn] : cls.admissible) got += " " + pair_tag(cm, cn);
    got += " }";
    expect(out, "classification", cls.admissible == want, "admissible set is " + got);
}

void checks_atf(i64 p, i64 q, std::vector<Check>& out) {
    const IntVec2 slant{checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1)};
    const auto ct = corner_type({0, 1}, slant);
    const CornerType want{slant.x, slant.y, false};
    expect(out, "wedge-corner", ct == want,
           "wedge corner reads 1/" + std::to_string(ct.n) + "(1," + std::to_string(ct.a) + ")" +
               (ct.reflected ? "*" : ""));
    const auto S = monodromy_shear(p, q);
    const bool shear_ok = S.det() == 1 && S.trace() == 2 && S.apply({p, q}) == IntVec2{p, q} &&
                          S.apply(slant) == IntVec2{0, -1};
    expect(out, "monodromy-shear", shear_ok, "shear is not unipotent on the branch ray");
    const auto wh = whitney_embedding_matrix(p, q);
    const bool wh_ok = wh.M.det() == 1 && wh.M.apply({p, q}) == IntVec2{1, 1};
    expect(out, "whitney-normalization", wh_ok, "embedding matrix misses the (1,1) ray");
}

// Floating-point local-model checks; run once, not per pair.
void checks_local(std::vector<Check>& out, int grid, int samples) {
    const double r21 = lagrangian_check(2, 1, 32);
    expect(out, "lagrangian-2-1", r21 <= kLagrangianResidualTol, fmt_sci(r21));
    const double r52 = lagrangian_check(5, 2, grid);
    expect(out, "lagrangian-5-2", r52 <= kLagrangianResidualTol, fmt_sci(r52));
    const double coarse = lagrangian_check(5, 2, 24, 1e-3);
    const double fine = lagrangian_check(5, 2, 24, 5e-4);
    const double ratio = coarse / fine;
    expect(out, "residual-order", ratio > 3.8 && ratio < 4.2, "halving ratio " + fmt_sci(ratio));
    const auto pts = random_phase_points(100, 424242);
    const double dzero = straightening_check([](double) { return 0.0; }, pts);
    expect(out, "straightening-zero", dzero <= 1e-9, fmt_sci(dzero));
    const double dsin = straightening_check([](double t) { return std::sin(t); }, pts);
    expect(out, "straightening-sin", dsin <= kSymplecticJacobianTol, fmt_sci(dsin));
    const double dlin = straightening_check([](double t) { return 2 * t; }, pts);
    expect(out, "straightening-linear", dlin <= kSymplecticJacobianTol, fmt_sci(dlin));
    for (auto [p, q] : {std::pair<i64, i64>{3, 1}, {5, 2}, {7, 3}}) {
        const auto qc = quotient_action_check(p, q, samples);
        expect(out, "quotient-" + std::to_string(p) + "-" + std::to_string(q), qc.ok(),
               "defect " + fmt_sci(qc.max_defect) + ", motion " + fmt_sci(qc.min_motion));
    }
    bool symbolic = true;
    for (i64 p = 2; p <= 12 && symbolic; ++p)
        for (i64 q = 1; q < p && symbolic; ++q)
            if (gcd_i64(p, q) == 1)
                symbolic = symbolic_lagrangian_residual(p, q).terms.empty() &&
                           symbolic_quotient_invariance(p, q);
    expect(out, "symbolic-sweep", symbolic, "a symbolic cancellation failed below p = 13");
}

// ---- hj subcommands ----

int run_hj_expand(const std::string& frac, bool as_json) {
    const Rational f = parse_rational(frac);
    const auto cf = hj_expand(f);
    if (as_json) {
        Report r;
        r.command = "hj expand";
        r.inputs["value"] = f.to_string();
        r.outputs["coefficients"] = cf.coeffs;
        print_json(r);
    } else {
        std::cout << f.to_string() << " = " << fmt_vec(cf.coeffs) << "\n";
    }
    return 0;
}

int run_hj_dual(const std::string& frac, bool as_json) {
    const Rational f = parse_rational(frac);
    const auto cf = hj_expand(f);
    const auto dual = hj_dual(f);
    const Rational dvalue = Rational::make(f.num, i128(f.num) - f.den);
    if (as_json) {
        Report r;
        r.command = "hj dual";
        r.inputs["value"] = f.to_string();
        r.outputs["coefficients"] = cf.coeffs;
        r.outputs["dual_value"] = dvalue.to_string();
        r.outputs["dual_coefficients"] = dual.coeffs;
        print_json(r);
    } else {
        std::cout << f.to_string() << " = " << fmt_vec(cf.coeffs) << "\n"
                  << "dual " << dvalue.to_string() << " = " << fmt_vec(dual.coeffs) << "\n";
    }
    return 0;
}

int run_hj_wahl(i64 p, i64 q, bool as_json) {
    const auto w = wahl_chain(p, q);
    const auto dual = wahl_dual_chain(p, q);
    const i64 d0 = compute_d0(p, q);
    const Rational value = Rational::make(i128(p) * p, i128(p) * q - 1);
    const Rational dvalue = Rational::make(i128(p) * p, i128(p) * p - i128(p) * q + 1);
    std::vector<Check> checks;
    checks_hj(p, q, checks);
    if (as_json) {
        Report r;
        r.command = "hj wahl";
        r.inputs["p"] = p;
        r.inputs["q"] = q;
        r.outputs["value"] = value.to_string();
        r.outputs["wahl"] = w.wahl.coeffs;
        r.outputs["dual_value"] = dvalue.to_string();
        r.outputs["dual"] = dual.coeffs;
        r.outputs["xs"] = w.xs.coeffs;
        r.outputs["ys"] = w.ys.coeffs;
        r.outputs["d0"] = d0;
        r.checks = checks;
        print_json(r);
    } else {
        std::cout << "wahl " << pair_tag(p, q) << ": " << value.to_string() << " = "
                  << fmt_vec(w.wahl.coeffs) << "\n"
                  << "dual: " << dvalue.to_string() << " = " << fmt_vec(dual.coeffs) << "\n"
                  << "splice: " << Rational(p, q).to_string() << " = " << fmt_vec(w.xs.coeffs)
                  << ", " << Rational(p, p - q).to_string() << " = " << fmt_vec(w.ys.coeffs)
                  << "\n"
                  << "d0 = " << d0 << "\n";
        for (const auto& c : checks)
            std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL " + c.witness)
                      << "\n";
    }
    for (const auto& c : checks)
        if (!c.pass) return 1;
    return 0;
}

// ---- verify ----

struct VerifyOpts {
    i64 max_p = 30;
    std::string only;
    std::vector<i64> pair;
    bool as_json = false;
};

using ModuleFn = void (*)(i64, i64, std::vector<Check>&);

const std::vector<std::pair<std::string, ModuleFn>>& pair_modules() {
    static const std::vector<std::pair<std::string, ModuleFn>> mods = {
        {"hj", checks_hj},
        {"chain", checks_chain},
        {"compactify", checks_compactify},
        {"regulation", checks_regulation},
        {"embeddings", checks_embeddings},
        {"atf", checks_atf},
    };
    return mods;
}

std::vector<std::pair<i64, i64>> coprime_pairs_up_to(i64 max_p) {
    std::vector<std::pair<i64, i64>> out;
    for (i64 p = 2; p <= max_p; ++p)
        for (i64 q = 1; q < p; ++q)
            if (gcd_i64(p, q) == 1) out.push_back({p, q});
    return out;
}

unsigned worker_count(std::size_t jobs) {
    long v = 0;
    if (const char* env = std::getenv("PINWHEEL_JOBS")) {
        char* end = nullptr;
        v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 256) {
            std::cerr << "warning: ignoring PINWHEEL_JOBS='" << env << "'\n";
            v = 0;
        }
    }
    if (v == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        v = hw ? static_cast<long>(std::min(hw, 8u)) : 1;
    }
    if (jobs == 0) jobs = 1;
    return static_cast<unsigned>(std::min<std::size_t>(static_cast<std::size_t>(v), jobs));
}

// Runs body(0..n-1) on a small pool; results must land in preallocated slots
// so collection order stays deterministic.
template <typename F>
void run_parallel(std::size_t n, F&& body) {
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mx;
    std::exception_ptr err;
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mx);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

void print_contraction_trace(i64 p, i64 q, std::ostream& os) {
    const auto tr = contraction_simulator(p, q);
    os << "contraction trace " << pair_tag(p, q) << ": C1 " << tr.c1_initial << " -> "
       << tr.c1_final << ", D0 +" << tr.d0 << ", steps " << tr.steps << ", classes " << tr.betti
       << "\n";
    os << "  " << fmt_vec(tr.states.front()) << "\n";
    for (std::size_t i = 0; i < tr.contracted.size(); ++i)
        os << "  step " << (i + 1) << " contracts slot " << tr.contracted[i] << " -> "
           << fmt_vec(tr.states[i + 1]) << "\n";
}

json contraction_json(i64 p, i64 q) {
    const auto tr = contraction_simulator(p, q);
    json j;
    j["states"] = tr.states;
    j["contracted"] = tr.contracted;
    j["c1"] = json::array({tr.c1_initial, tr.c1_final});
    j["d0"] = tr.d0;
    j["steps"] = tr.steps;
    j["betti"] = tr.betti;
    return j;
}

int run_verify(const VerifyOpts& o) {
    if (o.max_p > kMaxSweepP) throw std::domain_error("--max-p is capped at 500");
    std::vector<std::pair<std::string, ModuleFn>> mods;
    for (const auto& [name, fn] : pair_modules())
        if (o.only.empty() || o.only == name) mods.push_back({name, fn});
    const bool with_local = o.only.empty() || o.only == "local";
    const bool detailed = !o.pair.empty();

    std::vector<std::pair<i64, i64>> pairs;
    if (detailed) {
        if (o.pair[0] > kMaxSweepP) throw std::domain_error("p is capped at 500");
        require_wahl_pair(o.pair[0], o.pair[1]);
        pairs.push_back({o.pair[0], o.pair[1]});
    } else {
        pairs = coprime_pairs_up_to(o.max_p);
    }
    if (pairs.empty() && !mods.empty())
        std::cerr << "warning: no coprime pairs with 2 <= p <= " << o.max_p
                  << "; pair checks pass vacuously\n";

    std::vector<std::vector<Check>> slots(pairs.size());
    run_parallel(pairs.size(), [&](std::size_t i) {
        auto& cs = slots[i];
        for (const auto& [name, fn] : mods) {
            const std::size_t before = cs.size();
            fn(pairs[i].first, pairs[i].second, cs);
            for (std::size_t k = before; k < cs.size(); ++k) cs[k].name = name + "/" + cs[k].name;
        }
    });
    std::vector<Check> local;
    if (with_local) {
        checks_local(local, 64, 1000);
        for (auto& c : local) c.name = "local/" + c.name;
    }

    std::size_t total = local.size();
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        total += slots[i].size();
        for (const auto& c : slots[i])
            if (!c.pass)
                failures.push_back(pair_tag(pairs[i].first, pairs[i].second) + " " + c.name +
                                   ": " + c.witness);
    }
    for (const auto& c : local)
        if (!c.pass) failures.push_back(c.name + ": " + c.witness);

    const bool want_trace =
        detailed && (o.only.empty() || o.only == "regulation") && !pairs.empty();

    if (o.as_json) {
        Report r;
        r.command = "verify";
        if (detailed)
            r.inputs["pair"] = json::array({pairs[0].first, pairs[0].second});
        else
            r.inputs["max_p"] = o.max_p;
        r.inputs["only"] = o.only.empty() ? "all" : o.only;
        r.outputs["pairs"] = pairs.size();
        r.outputs["checks"] = total;
        r.outputs["failures"] = failures.size();
        if (want_trace) r.outputs["contraction"] = contraction_json(pairs[0].first, pairs[0].second);
        if (detailed) {
            for (std::size_t i = 0; i < pairs.size(); ++i)
                for (const auto& c : slots[i]) r.checks.push_back(c);
            for (const auto& c : local) r.checks.push_back(c);
        } else {
            for (std::size_t i = 0; i < pairs.size(); ++i)
                for (const auto& c : slots[i])
                    if (!c.pass)
                        r.checks.push_back({pair_tag(pairs[i].first, pairs[i].second) + " " +
                                                c.name,
                                            false, c.witness});
            for (const auto& c : local)
                if (!c.pass) r.checks.push_back(c);
        }
        print_json(r);
        return failures.empty() ? 0 : 1;
    }

    std::cout << "verify: ";
    if (detailed)
        std::cout << "pair " << pair_tag(pairs[0].first, pairs[0].second);
    else
        std::cout << "pairs 2 <= p <= " << o.max_p;
    std::cout << ", modules:";
    for (const auto& [name, fn] : mods) std::cout << " " << name;
    if (with_local) std::cout << " local";
    std::cout << "\n";

    if (detailed) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (const auto& c : slots[i])
                std::cout << "  " << std::left << std::setw(36) << c.name
                          << (c.pass ? "pass" : "FAIL  " + c.witness) << "\n";
        for (const auto& c : local)
            std::cout << "  " << std::left << std::setw(36) << c.name
                      << (c.pass ? "pass" : "FAIL  " + c.witness) << "\n";
        if (want_trace) print_contraction_trace(pairs[0].first, pairs[0].second, std::cout);
    } else {
        for (const auto& f : failures) std::cout << "fail " << f << "\n";
    }
    std::cout << "pairs: " << pairs.size() << "  checks: " << total
              << "  failures: " << failures.size() << "\n";
    std::cout << "result: " << (failures.empty() ? "PASS" : "FAIL") << "\n";
    return failures.empty() ? 0 : 1;
}

// ---- diagram ----

json diagram_json(const BaseDiagram& d) {
    json j;
    j["label"] = d.label;
    json verts = json::array();
    for (const auto& v : d.vertices) verts.push_back(qvec_json(v));
    j["vertices"] = std::move(verts);
    json edges = json::array();
    for (const auto& e : d.edges) {
        json je;
        je["start"] = e.start;
        je["dir"] = ivec_json(e.dir);
        je["length"] = e.length ? json(e.length->to_string()) : json("inf");
        je["dashed"] = e.dashed;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    json nodes = json::array();
    for (const auto& nd : d.nodes) {
        json jn;
        jn["point"] = qvec_json(nd.point);
        jn["eigendirection"] = ivec_json(nd.eigendirection);
        jn["cut_target"] = nd.cut_target;
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    json corners = json::array();
    for (const auto& c : d.corners) {
        json jc;
        jc["vertex"] = c.vertex;
        jc["u"] = ivec_json(c.u);
        jc["v"] = ivec_json(c.v);
        jc["n"] = c.type.n;
        jc["a"] = c.type.a;
        jc["reflected"] = c.type.reflected;
        corners.push_back(std::move(jc));
    }
    j["corners"] = std::move(corners);
    json anns = json::array();
    for (const auto& a : d.annotations) {
        json ja;
        ja["at"] = qvec_json(a.at);
        ja["text"] = a.text;
        anns.push_back(std::move(ja));
    }
    j["annotations"] = std::move(anns);
    return j;
}

// No output path: SVG to stdout.  With a path: SVG file plus a JSON sidecar
// describing the exact rational geometry.
int emit_diagram(const BaseDiagram& d, const std::string& out_path) {
    const std::string svg = emit_svg(d);
    if (out_path.empty()) {
        std::cout << svg;
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << svg;
    f.close();
    if (!f) throw std::runtime_error("short write to '" + out_path + "'");
    std::string side = out_path;
    if (side.size() >= 4 && side.compare(side.size() - 4, 4, ".svg") == 0)
        side.resize(side.size() - 4);
    side += ".json";
    std::ofstream jf(side, std::ios::binary);
    if (!jf) throw std::runtime_error("cannot open '" + side + "' for writing");
    jf << diagram_json(d).dump(2) << "\n";
    jf.close();
    if (!jf) throw std::runtime_error("short write to '" + side + "'");
    std::cout << "wrote " << out_path << "\n"
              << "wrote " << side << "\n";
    return 0;
}

int run_diagram_pin(i64 p, i64 q, const std::string& alpha_s, const std::string& beta_s,
                    const std::string& out_path) {
    const auto d = build_pin_diagram(p, q, parse_size(alpha_s), parse_size(beta_s));
    return emit_diagram(d, out_path);
}

int run_diagram_compactify(i64 p, i64 q, const std::string& height_s,
                           const std::string& out_path) {
    std::optional<Rational> height;
    if (!height_s.empty()) height = parse_rational(height_s);
    const auto d = compactification_diagram(p, q, height);
    return emit_diagram(d, out_path);
}

// ---- nonsqueeze and classify ----

int run_nonsqueeze(i64 p, i64 q, const std::string& alpha_s, const std::string& lambda_s,
                   const std::string& cylinder, bool as_json) {
    NonsqueezeQuery nq;
    nq.p = p;
    nq.q = q;
    nq.alpha = parse_rational(alpha_s);
    nq.lambda = parse_rational(lambda_s);
    nq.cylinder_kind = cylinder == "second" ? CylinderKind::second_axis : CylinderKind::first_axis;
    const auto v = nonsqueeze_verdict(nq);
    const char* verdict = v.allowed ? "allowed" : "obstructed";
    if (as_json) {
        Report r;
        r.command = "nonsqueeze";
        r.inputs["p"] = p;
        r.inputs["q"] = q;
        r.inputs["alpha"] = nq.alpha.to_string();
        r.inputs["lambda"] = nq.lambda.to_string();
        r.inputs["cylinder"] = cylinder;
        r.outputs["allowed"] = v.allowed;
        r.outputs["bound"] = v.bound.to_string();
        r.outputs["coefficient"] = v.coefficient.to_string();
        r.outputs["area_scale"] = v.area_scale.to_string();
        r.outputs["cylinders_distinct"] = v.cylinders_distinct;
        r.outputs["verdict"] = verdict;
        print_json(r);
    } else {
        std::cout << "nonsqueeze " << pair_tag(p, q) << ": alpha " << nq.alpha.to_string()
                  << ", lambda " << nq.lambda.to_string() << ", cylinder " << cylinder
                  << "-axis\n"
                  << "coefficient " << v.coefficient.to_string() << "\n"
                  << "area-scale " << v.area_scale.to_string() << "\n"
                  << "bound " << v.bound.to_string() << "\n"
                  << "cylinders-distinct " << (v.cylinders_distinct ? "yes" : "no") << "\n"
                  << "verdict: " << verdict << "\n";
    }
    return 0;
}

int run_classify(i64 p, i64 q) {
    const auto cls = classify_pinwheels(p, q);
    json arr = json::array();
    for (const auto& [m, n] : cls.admissible) arr.push_back(json::array({m, n}));
    std::cout << arr.dump() << "\n";
    return 0;
}

// ---- verify-local ----

int run_verify_local(int grid, int samples, bool as_json) {
    if (grid < 4) throw std::domain_error("--grid must be at least 4");
    if (samples < 1) throw std::domain_error("--samples must be positive");
    std::vector<Check> checks;
    checks_local(checks, grid, samples);
    const auto status = [&](const char* name) -> const Check& {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::logic_error("missing local check");
    };
    const auto mark = [](const Check& c) { return c.pass ? "pass" : "FAIL"; };

    bool all = true;
    for (const auto& c : checks) all = all && c.pass;

    if (as_json) {
        Report r;
        r.command = "verify-local";
        r.inputs["grid"] = grid;
        r.inputs["samples"] = samples;
        r.outputs["residual_2_1"] = lagrangian_check(2, 1, 32);
        r.outputs["residual_5_2"] = lagrangian_check(5, 2, grid);
        r.outputs["halving_ratio"] =
            lagrangian_check(5, 2, 24, 1e-3) / lagrangian_check(5, 2, 24, 5e-4);
        r.checks = checks;
        print_json(r);
        return all ? 0 : 1;
    }

    const auto row = [&](const char* name, const std::string& text) {
        std::cout << "  " << std::left << std::setw(44) << text << mark(status(name)) << "\n";
    };
    std::cout << "lagrangian residual, tolerance " << fmt_sci(kLagrangianResidualTol) << "\n";
    row("lagrangian-2-1",
        "(2,1) grid 32   max " + fmt_sci(lagrangian_check(2, 1, 32)));
    row("lagrangian-5-2",
        "(5,2) grid " + std::to_string(grid) + "   max " + fmt_sci(lagrangian_check(5, 2, grid)));
    row("residual-order",
        "step halving ratio " +
            fmt_sci(lagrangian_check(5, 2, 24, 1e-3) / lagrangian_check(5, 2, 24, 5e-4)) +
            " (want ~4)");
    std::cout << "straightening deviation at 100 points, tolerance "
              << fmt_sci(kSymplecticJacobianTol) << "\n";
    const auto pts = random_phase_points(100, 424242);
    row("straightening-zero",
        "eta zero     " + fmt_sci(straightening_check([](double) { return 0.0; }, pts)));
    row("straightening-sin",
        "eta sin      " + fmt_sci(straightening_check([](double t) { return std::sin(t); }, pts)));
    row("straightening-linear",
        "eta linear   " + fmt_sci(straightening_check([](double t) { return 2 * t; }, pts)));
    std::cout << "quotient action, " << samples << " samples per pair, tolerance "
              << fmt_sci(kQuotientDefectTol) << "\n";
    for (auto [p, q] : {std::pair<i64, i64>{3, 1}, {5, 2}, {7, 3}}) {
        const auto qc = quotient_action_check(p, q, samples);
        row(("quotient-" + std::to_string(p) + "-" + std::to_string(q)).c_str(),
            pair_tag(p, q) + "  defect " + fmt_sci(qc.max_defect) + "  motion " +
                fmt_sci(qc.min_motion));
    }
    row("symbolic-sweep", "symbolic cancellation for coprime p <= 12");
    std::cout << "result: " << (all ? "PASS" : "FAIL") << "\n";
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact pinwheel calculus: continued fractions, Wahl chains, compactifying "
                 "divisors, base diagrams, embedding bounds"};
    app.require_subcommand(1);
    int rc = 0;
    bool as_json = false;

    auto* hj = app.add_subcommand("hj", "continued-fraction calculus");
    hj->require_subcommand(1);
    std::string frac;
    i64 wp = 0, wq = 0;
    auto* expand = hj->add_subcommand("expand", "minimal expansion with all entries >= 2");
    expand->add_option("value", frac, "fraction n/a or integer")->required();
    expand->add_flag("--json", as_json, "machine-readable report");
    expand->callback([&] { rc = run_hj_expand(frac, as_json); });
    auto* dual = hj->add_subcommand("dual", "expansion together with its dual n/(n-a)");
    dual->add_option("value", frac, "fraction n/a")->required();
    dual->add_flag("--json", as_json, "machine-readable report");
    dual->callback([&] { rc = run_hj_dual(frac, as_json); });
    auto* wahl = hj->add_subcommand("wahl", "Wahl chain of p^2/(pq-1) with its dual and d0");
    wahl->add_option("p", wp, "p >= 2")->required();
    wahl->add_option("q", wq, "0 < q < p, coprime to p")->required();
    wahl->add_flag("--json", as_json, "machine-readable report");
    wahl->callback([&] { rc = run_hj_wahl(wp, wq, as_json); });

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "run the structural checks over coprime pairs");
    verify->add_option("--max-p", vo.max_p, "sweep all coprime (p,q) with p up to this bound")
        ->capture_default_str();
    verify->add_option("--only", vo.only, "restrict to one module")
        ->check(CLI::IsMember(
            {"hj", "chain", "compactify", "regulation", "embeddings", "atf", "local"}));
    verify->add_option("--pair", vo.pair, "check a single pair P Q in detail")
        ->expected(2);
    verify->add_flag("--json", vo.as_json, "machine-readable report");
    verify->callback([&] { rc = run_verify(vo); });

    auto* diagram = app.add_subcommand("diagram", "emit base diagrams as deterministic SVG");
    diagram->require_subcommand(1);
    i64 dp = 0, dq = 0;
    std::string alpha_s = "inf", beta_s = "inf", height_s, out_path;
    auto* pin = diagram->add_subcommand("pin-ellipsoid", "pin wedge with rational or open sides");
    pin->add_option("p", dp, "p >= 2")->required();
    pin->add_option("q", dq, "0 < q < p, coprime to p")->required();
    pin->add_option("--alpha", alpha_s, "slant side size, a/b or inf")->capture_default_str();
    pin->add_option("--beta", beta_s, "vertical side size, a/b or inf")->capture_default_str();
    pin->add_option("-o,--output", out_path, "write SVG here plus a .json sidecar");
    pin->callback([&] { rc = run_diagram_pin(dp, dq, alpha_s, beta_s, out_path); });
    auto* comp = diagram->add_subcommand("compactify", "capped wedge with the divisor profile");
    comp->add_option("p", dp, "p >= 2")->required();
    comp->add_option("q", dq, "0 < q < p, coprime to p")->required();
    comp->add_option("--height", height_s, "cap height, a/b; defaults to pq-1");
    comp->add_option("-o,--output", out_path, "write SVG here plus a .json sidecar");
    comp->callback([&] { rc = run_diagram_compactify(dp, dq, height_s, out_path); });

    i64 np = 0, nq = 0;
    std::string ns_alpha, ns_lambda, cylinder = "first";
    auto* nonsq = app.add_subcommand("nonsqueeze", "ball-into-cylinder embedding bound");
    nonsq->add_option("p", np, "p >= 2")->required();
    nonsq->add_option("q", nq, "0 < q < p, coprime to p")->required();
    nonsq->add_option("--alpha", ns_alpha, "ball size, a/b")->required();
    nonsq->add_option("--lambda", ns_lambda, "cylinder size, a/b")->required();
    nonsq->add_option("--cylinder", cylinder, "which factor stays finite")
        ->check(CLI::IsMember({"first", "second"}))
        ->capture_default_str();
    nonsq->add_flag("--json", as_json, "machine-readable report");
    nonsq->callback([&] { rc = run_nonsqueeze(np, nq, ns_alpha, ns_lambda, cylinder, as_json); });

    i64 cp = 0, cq = 0;
    auto* classify = app.add_subcommand("classify", "admissible pinwheels as a JSON array");
    classify->add_option("p", cp, "p >= 2")->required();
    classify->add_option("q", cq, "0 < q < p, coprime to p")->required();
    classify->callback([&] { rc = run_classify(cp, cq); });

    int grid = 64, samples = 1000;
    auto* local = app.add_subcommand("verify-local", "floating-point local-model residual tables");
    local->add_option("--grid", grid, "grid resolution for the residual scan")
        ->capture_default_str();
    local->add_option("--samples", samples, "sample count for the quotient check")
        ->capture_default_str();
    local->add_flag("--json", as_json, "machine-readable report");
    local->callback([&] { rc = run_verify_local(grid, samples, as_json); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
