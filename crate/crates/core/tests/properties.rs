use std::collections::BTreeSet;

use proptest::prelude::*;

use pkme::constructors::{general_2mk, general_2mk1, pkme_4k, pkme_4k1, pkme_5, pkme_6qubit, pkme_7};
use pkme::gates::{apply_local, apply_pipeline, NamedPipeline};
use pkme::structures::{enumerate_structures, four_partite_spec, PlanarStructure, StructureSpec};
use pkme::tensor::{deviation_from_maximally_mixed, haar_random_unitary, partial_trace, PureState, RngState};
use pkme::verifier::{verify_pkme, DEFAULT_TOLERANCE};

mod common;
use common::{brute_force_reduced, max_entry_gap};

/// Random state with at most 3^6 amplitudes plus a non-empty position subset.
fn state_and_subset() -> impl Strategy<Value = (PureState, Vec<usize>)> {
    (1usize..=6, 2usize..=3, any::<u64>())
        .prop_flat_map(|(n, d, seed)| {
            let subset = proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=n);
            (Just(n), Just(d), Just(seed), subset)
        })
        .prop_map(|(n, d, seed, subset)| {
            let mut rng = RngState::from_seed(seed);
            (PureState::random(n, d, &mut rng).unwrap(), subset)
        })
}

fn positive_fixtures() -> Vec<(PureState, StructureSpec)> {
    vec![
        (pkme_4k(1, 3).unwrap(), four_partite_spec(4, 1).unwrap()),
        (pkme_4k(2, 2).unwrap(), four_partite_spec(8, 2).unwrap()),
        (pkme_6qubit().unwrap(), StructureSpec::new(6, vec![1, 2], vec![1, 2]).unwrap()),
        (pkme_5(3).unwrap(), four_partite_spec(5, 1).unwrap()),
        (pkme_4k1(1).unwrap(), four_partite_spec(5, 1).unwrap()),
        (pkme_7().unwrap(), StructureSpec::new(7, vec![2, 1], vec![2, 2]).unwrap()),
        (general_2mk(3, 1).unwrap(), StructureSpec::uniform(3, 1).unwrap()),
        (general_2mk1(3, 1).unwrap(), StructureSpec::uniform_odd(3, 1).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn partial_trace_matches_double_sum((state, keep) in state_and_subset()) {
        let rho = partial_trace(&state, &keep).unwrap();
        let oracle = brute_force_reduced(&state, &keep);
        prop_assert!(max_entry_gap(&rho, &oracle) <= 1e-12);
    }

    #[test]
    fn reduced_states_are_density_matrices((state, keep) in state_and_subset()) {
        let rho = partial_trace(&state, &keep).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(rho.trace().im.abs() <= 1e-12);
        prop_assert!(rho.hermiticity_defect() <= 1e-12);
        if let Some(min) = rho.min_eigenvalue() {
            prop_assert!(min >= -1e-12);
        } else {
            prop_assert!(rho.dim() > 256);
        }
        prop_assert!(rho.check_invariants().is_ok());
    }

    #[test]
    fn tracing_in_stages_agrees((state, keep) in state_and_subset(), pick in any::<u64>()) {
        prop_assume!(keep.len() >= 2);
        // non-empty proper-or-full subset of `keep` chosen by the bits of `pick`
        let mut inner: Vec<usize> = keep
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if inner.is_empty() {
            inner.push(keep[0]);
        }
        let staged = partial_trace(&state, &keep).unwrap().reduce(&inner).unwrap();
        let direct = partial_trace(&state, &inner).unwrap();
        for (a, b) in staged.entries().iter().zip(direct.entries()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }

        // the partial trace contracts the Frobenius distance to I/d^k by at
        // most a factor sqrt(d^|traced|)
        let d = state.d() as f64;
        let traced = (keep.len() - inner.len()) as i32;
        let dev_outer = deviation_from_maximally_mixed(&partial_trace(&state, &keep).unwrap());
        let dev_inner = deviation_from_maximally_mixed(&direct);
        prop_assert!(dev_inner <= d.powi(traced).sqrt() * dev_outer + 1e-12);
    }

    #[test]
    fn pipelines_invert(seed in any::<u64>(), d in 2usize..=3, which in 0usize..4) {
        let kind = [
            NamedPipeline::EightQuditTailFirst,
            NamedPipeline::FiveQuditHeadFirst,
            NamedPipeline::Even4k(1),
            NamedPipeline::Odd4k1Reversed(1),
        ][which];
        let mut rng = RngState::from_seed(seed);
        let pipeline = kind.build(kind.random_branches(d, &mut rng).unwrap()).unwrap();
        let n = kind.sites_required().unwrap();
        let state = PureState::random(n, d, &mut rng).unwrap();
        let out = apply_pipeline(&state, &pipeline).unwrap();
        let back = apply_pipeline(&out, &pipeline.inverse()).unwrap();
        prop_assert!(back.max_abs_diff(&state).unwrap() <= 1e-12);
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn local_unitaries_keep_every_deviation(seed in any::<u64>(), which in 0usize..8) {
        let (state, spec) = positive_fixtures().swap_remove(which);
        let mut rng = RngState::from_seed(seed);
        let mut moved = state.clone();
        for p in 1..=state.n() {
            let u = haar_random_unitary(state.d(), &mut rng).unwrap();
            moved = apply_local(&moved, p, &u).unwrap();
        }
        let before = verify_pkme(&state, &spec, DEFAULT_TOLERANCE).unwrap();
        let after = verify_pkme(&moved, &spec, DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(before.verdict(), after.verdict());
        for (a, b) in before.checks().iter().zip(after.checks()) {
            prop_assert_eq!(&a.subset, &b.subset);
            prop_assert!((a.deviation - b.deviation).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_local_unitary_on_generic_state_keeps_deviation(seed in any::<u64>()) {
        let mut rng = RngState::from_seed(seed);
        let state = PureState::random(5, 2, &mut rng).unwrap();
        let spec = four_partite_spec(5, 1).unwrap();
        let u = haar_random_unitary(2, &mut rng).unwrap();
        let moved = apply_local(&state, 3, &u).unwrap();
        let a = verify_pkme(&state, &spec, DEFAULT_TOLERANCE).unwrap();
        let b = verify_pkme(&moved, &spec, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((a.max_deviation() - b.max_deviation()).abs() <= 1e-12);
    }
}

/// Every `floor(n/2)`-subset whose cyclic runs alternate with the rest in
/// `m` A-arcs and `m` B-arcs of the given sizes, found by brute force.
fn brute_force_regions(spec: &StructureSpec) -> BTreeSet<Vec<usize>> {
    let n = spec.n();
    let mut found = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n / 2 {
            continue;
        }
        let in_a = |p: usize| mask >> (p % n) & 1 == 1;
        // start just after an A->B boundary so every run is complete
        let Some(start) = (0..n).find(|&p| in_a(p) && !in_a(p + 1)) else {
            continue;
        };
        let mut a_runs = Vec::new();
        let mut b_runs = Vec::new();
        let mut run = 0;
        let mut current = in_a(start + 1);
        for step in 1..=n {
            let here = in_a(start + step);
            if here == current {
                run += 1;
            } else {
                if current { a_runs.push(run) } else { b_runs.push(run) }
                current = here;
                run = 1;
            }
        }
        if current { a_runs.push(run) } else { b_runs.push(run) }
        a_runs.sort_unstable();
        b_runs.sort_unstable();
        if a_runs == spec.a_sizes() && b_runs == spec.b_sizes() {
            found.insert((0..n).filter(|&p| in_a(p)).map(|p| p + 1).collect());
        }
    }
    found
}

fn size_vectors(total: usize, parts: usize) -> Vec<Vec<usize>> {
    // non-decreasing compositions of `total` into `parts` positive sizes
    fn go(rest: usize, parts: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for s in min..=rest {
            acc.push(s);
            go(rest - s, parts - 1, s, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, 1, &mut Vec::new(), &mut out);
    out
}

fn all_specs(max_n: usize) -> Vec<StructureSpec> {
    let mut specs = Vec::new();
    for n in 4..=max_n {
        for m in 2..=n / 2 {
            for a in size_vectors(n / 2, m) {
                for b in size_vectors(n - n / 2, m) {
                    specs.push(StructureSpec::new(n, a.clone(), b).unwrap());
                }
            }
        }
    }
    specs
}

#[test]
fn enumeration_matches_brute_force_up_to_twelve() {
    let specs = all_specs(12);
    assert!(specs.len() > 50);
    for spec in specs {
        let listed = enumerate_structures(&spec);
        let regions: Vec<Vec<usize>> = listed.iter().map(PlanarStructure::region_a).collect();
        let unique: BTreeSet<Vec<usize>> = regions.iter().cloned().collect();
        assert_eq!(unique.len(), regions.len(), "duplicates for {spec}");
        assert_eq!(unique, brute_force_regions(&spec), "mismatch for {spec}");
        for s in &listed {
            s.validate().unwrap();
            assert!(s.matches(&spec));
            for steps in 0..spec.n() {
                assert!(unique.contains(&s.rotated(steps).region_a()), "{spec}: rotation escapes");
            }
        }
    }
}

#[test]
fn four_partite_counts() {
    for k in 1..=4 {
        assert_eq!(enumerate_structures(&four_partite_spec(4 * k, k).unwrap()).len(), 2 * k);
        assert_eq!(enumerate_structures(&four_partite_spec(4 * k + 1, k).unwrap()).len(), 4 * k + 1);
    }
}

#[test]
fn maximally_mixed_regions_have_maximally_mixed_subsets() {
    for (state, spec) in positive_fixtures() {
        for s in enumerate_structures(&spec) {
            let region = s.region_a();
            let rho = partial_trace(&state, &region).unwrap();
            assert!(deviation_from_maximally_mixed(&rho) <= 1e-12);
            for mask in 1u32..(1 << region.len()) {
                let sub: Vec<usize> = region
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let sub_rho = partial_trace(&state, &sub).unwrap();
                assert!(deviation_from_maximally_mixed(&sub_rho) <= 1e-12);
            }
        }
    }
}

#[test]
fn general_families_nest_the_special_cases() {
    for k in 1..=2 {
        assert_eq!(general_2mk(2, k).unwrap(), pkme_4k(k, 2).unwrap());
        assert_eq!(general_2mk1(2, k).unwrap(), pkme_4k1(k).unwrap());
    }
    // the uniform family with m parts is also PKME for its own structures
    for m in 2..=4 {
        let r = verify_pkme(&general_2mk(m, 1).unwrap(), &StructureSpec::uniform(m, 1).unwrap(), 1e-10).unwrap();
        assert!(r.verdict());
    }
}
