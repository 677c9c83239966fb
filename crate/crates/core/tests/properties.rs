mod support;

use mrf_ptas::decomp::{build_grid_band, build_heuristic, grid_band_bound};
use mrf_ptas::graph::{bfs_levels, connected_components, delete_level_classes, grid_graph};
use mrf_ptas::mrf::{evaluate, shift_nonnegative, Assignment, ModelFile, MrfInstance};
use mrf_ptas::ptas::{solve_ptas, PtasConfig};
use mrf_ptas::solver::{solve_exact, DEFAULT_WIDTH_CAP};
use mrf_ptas::vision::{
    auto_beta, build_stereo_instance, median_smooth, noise_image, two_pass_combine, DisparityMap, Image, StereoParams,
    SweepDirection,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evaluate_matches_table_sum(seed in 0u64..10_000, labels in 1usize..4) {
        let inst = support::small_instance(seed, 9, labels, (-5, 5));
        let x: Vec<usize> = (0..inst.num_vertices()).map(|v| (v * 7 + seed as usize) % labels).collect();
        prop_assert_eq!(evaluate(&inst, &Assignment::new(x.clone())).unwrap(), support::score(&inst, &x));
    }

    #[test]
    fn shift_preserves_differences(seed in 0u64..10_000) {
        let inst = support::small_instance(seed, 6, 2, (-10, 10));
        let (shifted, offset) = shift_nonnegative(&inst);
        prop_assert!(shifted.is_nonnegative());
        for (x, s) in support::all_scores(&inst) {
            prop_assert_eq!(s, support::score(&shifted, &x) + offset);
        }
    }

    #[test]
    fn heuristic_decomposes_grid_subgraphs(seed in 0u64..10_000) {
        let inst = support::small_instance(seed, 16, 1, (0, 0));
        let g = inst.graph();
        prop_assume!(g.num_edges() > 0);
        let d = build_heuristic(g).unwrap();
        prop_assert!(d.validate(g).is_empty());
        // ternary tree: m leaves, m - 2 internal nodes
        let m = g.num_edges();
        prop_assert_eq!(d.num_nodes(), if m == 1 { 1 } else { 2 * m - 2 });
    }

    #[test]
    fn exact_solver_matches_enumeration(seed in 0u64..10_000, labels in 2usize..4) {
        let inst = support::small_instance(seed, 8, labels, (0, 10));
        prop_assume!(inst.graph().num_edges() > 0);
        let d = build_heuristic(inst.graph()).unwrap();
        let (x, value) = solve_exact(&inst, &d, DEFAULT_WIDTH_CAP).unwrap();
        prop_assert_eq!(value, support::optimum(&inst));
        prop_assert_eq!(support::score(&inst, x.labels()), value);
    }

    #[test]
    fn band_widths_respect_bound(w in 2usize..14, h in 2usize..14, k in 1usize..6, root_pick in 0usize..1000) {
        let g = grid_graph(w, h).unwrap();
        let levels = bfs_levels(&g, root_pick % g.num_vertices()).unwrap();
        for j in 0..k {
            let sub = delete_level_classes(&g, &levels, k, j).unwrap();
            for comp in connected_components(&sub).iter().filter(|c| !c.edges.is_empty()) {
                let local = g.extract(comp);
                if let Ok(d) = build_grid_band(&local, k) {
                    prop_assert!(d.width(&local) <= grid_band_bound(k));
                }
            }
        }
    }

    #[test]
    fn ptas_meets_its_bound(seed in 0u64..10_000, k in 1usize..5) {
        let inst = support::small_instance(seed, 9, 2, (0, 10));
        let sol = solve_ptas(&inst, &PtasConfig::with_k(k).unwrap()).unwrap();
        let opt = support::optimum(&inst);
        prop_assert!(sol.score >= (1.0 - 1.0 / k as f64) * opt - 1e-9);
        prop_assert_eq!(sol.diagnostics.slabs.len(), k);
    }

    #[test]
    fn seeded_sweeps_meet_the_bound(seed in 0u64..10_000, k in 1usize..5, backwards in any::<bool>()) {
        let inst = support::small_instance(seed, 9, 3, (0, 10));
        let dir = if backwards { SweepDirection::RightToLeft } else { SweepDirection::LeftToRight };
        let sol = solve_ptas(&inst, &PtasConfig::with_k(k).unwrap().seed_sweep(dir)).unwrap();
        prop_assert!(sol.score >= (1.0 - 1.0 / k as f64) * support::optimum(&inst) - 1e-9);
    }

    #[test]
    fn seeding_is_inert_without_pairwise_terms(seed in 0u64..10_000, k in 1usize..4) {
        let inst = support::small_instance(seed, 12, 3, (0, 10));
        let flat = MrfInstance::new(
            inst.graph().clone(),
            3,
            (0..inst.num_vertices()).map(|v| inst.phi_row(v).to_vec()).collect(),
            vec![vec![0.0; 9]; inst.graph().num_edges()],
        );
        let plain = solve_ptas(&flat, &PtasConfig::with_k(k).unwrap()).unwrap();
        let seeded = solve_ptas(&flat, &PtasConfig::with_k(k).unwrap().seed_sweep(SweepDirection::LeftToRight)).unwrap();
        prop_assert_eq!(plain.score, seeded.score);
    }

    #[test]
    fn model_json_round_trips(seed in 0u64..10_000) {
        let inst = support::small_instance(seed, 10, 3, (-4, 9));
        let text = ModelFile::render(&inst);
        prop_assert_eq!(ModelFile::parse(&text).unwrap(), inst);
    }

    #[test]
    fn stereo_instances_are_valid(w in 2usize..9, h in 1usize..6, l in 1usize..5, seed in 0u64..1000) {
        let left = noise_image(w, h, seed);
        let right = noise_image(w, h, seed + 1);
        let inst = build_stereo_instance(&left, &right, &StereoParams::new(l)).unwrap();
        prop_assert!(inst.validate().is_empty());
        prop_assert!(inst.is_nonnegative());
        let beta = auto_beta(&left, &right, l).unwrap();
        prop_assert!(beta >= 0.0);
    }

    #[test]
    fn combine_is_best_of(seed in 0u64..1000, a in proptest::collection::vec(0usize..3, 12), b in proptest::collection::vec(0usize..3, 12)) {
        let img: Image = noise_image(4, 3, seed);
        let inst = build_stereo_instance(&img, &noise_image(4, 3, seed + 9), &StereoParams::new(3)).unwrap();
        let (xa, xb) = (Assignment::new(a), Assignment::new(b));
        let best = two_pass_combine(xa.clone(), xb.clone(), &inst).unwrap();
        let score = evaluate(&inst, &best).unwrap();
        prop_assert!(score >= evaluate(&inst, &xa).unwrap());
        prop_assert!(score >= evaluate(&inst, &xb).unwrap());
    }

    #[test]
    fn smoothing_keeps_labels_in_range(labels in proptest::collection::vec(1usize..5, 30), r in 0usize..4) {
        let map = DisparityMap::new(6, 5, 4, labels).unwrap();
        let out = median_smooth(&map, r);
        prop_assert!(out.labels.iter().all(|&a| (1..=4).contains(&a)));
    }
}
