// Acceptance gate: twelve criteria, one pass/fail line each, nonzero exit if
// any fails. Each criterion aggregates named records from the verification
// suites at pinned n / sample counts / tolerances.

#include "gslice/verify.hpp"

#include <iostream>

using namespace gslice;

namespace {

struct SuiteCache {
    std::map<int, std::vector<CheckRecord>> structure, kostant, symplectic, systems;
    std::vector<CheckRecord> flows;

    explicit SuiteCache(const std::vector<int>& ns) {
        for (int n : ns) {
            RunConfig cfg;
            cfg.n = n;
            cfg.seed = 1;
            cfg.samples = 100;
            structure[n] = suites::structure(cfg);
            kostant[n] = suites::kostant(cfg);
            symplectic[n] = suites::symplectic(cfg);
            systems[n] = suites::systems(cfg);
        }
        RunConfig cfg;
        flows = suites::flows(cfg);
    }
};

const CheckRecord& find(const std::vector<CheckRecord>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r;
    throw std::logic_error("acceptance: missing record " + name);
}

/// All named records pass, and their measured values also clear the
/// criterion's own threshold where one is pinned.
bool all_pass(const SuiteCache& cache,
              const std::map<int, std::vector<CheckRecord>> SuiteCache::*suite,
              const std::vector<int>& ns, const std::vector<std::string>& names,
              double value_cap = -1.0) {
    bool ok = true;
    for (int n : ns)
        for (const auto& name : names) {
            const auto& r = find((cache.*suite).at(n), name);
            ok = ok && r.pass;
            if (value_cap > 0) ok = ok && r.value <= value_cap;
        }
    return ok;
}

bool counts_exact() {
    bool ok = true;
    for (int n = 2; n <= 5; ++n) {
        LieContext ctx(n);
        SlodowySlice slice(ctx, principal_triple(ctx));
        Matrix beta = sample(ctx, 6, SampleKind::regular_semisimple);
        beta /= frob(beta);
        const auto ip =
            build_invariant_pullback(ctx, slice, sample(ctx, 5, SampleKind::regular_semisimple));
        const auto mf = build_mf(ctx, slice, beta);
        ok = ok && static_cast<int>(ip.observables.size()) == n * n - 1;
        ok = ok && ip.declared_rank == n - 1;
        ok = ok && static_cast<int>(mf.observables.size()) == (n * n + n - 2) / 2;
    }
    return ok;
}

}  // namespace

int main() {
    const std::vector<int> n234 = {2, 3, 4}, n23 = {2, 3}, n3 = {3};
    SuiteCache cache(n234);

    struct Criterion {
        const char* label;
        bool pass;
    };
    std::vector<Criterion> cs;

    cs.push_back({"01 structure residuals (Jacobi, invariance, Killing=2n*trace; n=2..4)",
                  all_pass(cache, &SuiteCache::structure, n234,
                           {"jacobi_identity", "form_invariance_trace",
                            "form_invariance_killing", "killing_trace_proportionality"},
                           1e-9)});
    cs.push_back({"02 slice section (regularity at 500 pts, multistart <=1e-8, transversality)",
                  all_pass(cache, &SuiteCache::kostant, n234,
                           {"slice_in_regular_locus", "kostant_multistart_agreement",
                            "slice_transversality"})});
    cs.push_back({"03 submersion rank at 200 pts and regular image at 1000 pts",
                  all_pass(cache, &SuiteCache::symplectic, n23,
                           {"phi_submersion_rank", "phi_image_regular"})});
    cs.push_back({"04 Poisson-morphism two-engine agreement <=1e-8 (100 triples, n=2,3)",
                  all_pass(cache, &SuiteCache::symplectic, n23,
                           {"poisson_morphism_two_engines"}, 1e-8)});
    cs.push_back({"05 moment-map identity <=1e-8 (100 pairs)",
                  all_pass(cache, &SuiteCache::symplectic, n23, {"moment_map_identity"}, 1e-8)});
    cs.push_back({"06 fiber isotropy <=1e-9 and omega antisymmetric/nondegenerate (n=2..4)",
                  all_pass(cache, &SuiteCache::symplectic, n234,
                           {"fiber_isotropy", "omega_antisymmetry",
                            "omega_min_singular_value"})});
    cs.push_back({"07 exact system function counts (n=2..5)", counts_exact()});
    cs.push_back({"08 commutativity <=1e-8, both systems and engines (n=2,3,4)",
                  all_pass(cache, &SuiteCache::systems, n234,
                           {"invariant_pullback_commutativity_up",
                            "invariant_pullback_commutativity_down", "mf_commutativity_up",
                            "mf_commutativity_down"},
                           1e-8)});
    cs.push_back({"09 independence >=99% of 200 samples + rank drop at singular probes",
                  all_pass(cache, &SuiteCache::systems, n3,
                           {"invariant_pullback_independence", "mf_independence",
                            "independence_locus_proper", "regularity_locus_probe"}) &&
                      all_pass(cache, &SuiteCache::kostant, n3, {"invariant_gradient_locus"})});
    {
        bool ok = true;
        for (const char* name :
             {"mf_flow_conservation", "non_member_drift", "flow_convergence_order"})
            ok = ok && find(cache.flows, name).pass;
        cs.push_back({"10 flow conservation <=1e-6, negative control, 4th-order decay", ok});
    }
    cs.push_back({"11 fiber kinds: torus at 100 rss samples, nilpotent count n at -xi",
                  all_pass(cache, &SuiteCache::symplectic, n23,
                           {"fiber_torus_kind", "fiber_nilpotent_kind"})});
    cs.push_back({"12 dimension identity and 1000-sample image regularity",
                  all_pass(cache, &SuiteCache::symplectic, n234, {"ais_certificate"})});

    bool all = true;
    for (const auto& c : cs) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.label << "\n";
        all = all && c.pass;
    }
    std::cout << (all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL") << "\n";
    return all ? 0 : 1;
}
