use greechie::canon::canonical_form;
use greechie::constructions::{
    add_diagonal_edges, ag23, bundled_grid_diagonals, fano, merge, oml67, omp21,
    search_diagonal_edges, ConstructionError, SearchBudget,
};
use greechie::enumerate::{enumerate_diagrams, EnumerationOptions, EnumerationTask};
use greechie::measures::{
    analyze_group_measures, find_group_valued_measure, find_probability_measure,
    nonconstant_range_profile, verify_group_measure, GroupMeasureWitness,
};
use greechie::random::random_greechie;
use greechie::{DiagramKind, Hypergraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn every_pair_once(h: &Hypergraph) -> bool {
    let n = h.vertex_count();
    (1..=n).all(|a| {
        (a + 1..=n).all(|b| {
            h.edges()
                .iter()
                .filter(|e| e.contains(&a) && e.contains(&b))
                .count()
                == 1
        })
    })
}

#[test]
fn planes_are_canonical_and_complete() {
    for h in [fano(), ag23()] {
        assert_eq!(canonical_form(&h), h);
        assert!(every_pair_once(&h));
        assert!(h.is_greechie().0);
    }
    assert!(fano().degrees().iter().all(|&d| d == 3));
    assert!(ag23().degrees().iter().all(|&d| d == 4));
}

#[test]
fn range_profiles_of_the_planes() {
    let f = nonconstant_range_profile(&fano(), &[2, 3, 5, 7]).unwrap();
    assert_eq!(
        f.into_iter()
            .filter(|&(_, v)| v)
            .map(|(p, _)| p)
            .collect::<Vec<_>>(),
        [2]
    );
    let a = nonconstant_range_profile(&ag23(), &[2, 3, 5, 7]).unwrap();
    assert_eq!(
        a.into_iter()
            .filter(|&(_, v)| v)
            .map(|(p, _)| p)
            .collect::<Vec<_>>(),
        [3]
    );
}

#[test]
fn fixtures_have_the_expected_shape() {
    let omp = omp21();
    assert_eq!((omp.vertex_count(), omp.edge_count()), (21, 22));
    assert_eq!(omp.degree(18).unwrap(), 3);
    assert!(omp.edges().iter().any(|e| e == &vec![18, 19, 20, 21]));
    let oml = oml67();
    assert_eq!((oml.vertex_count(), oml.edge_count()), (67, 68));
    assert!(oml.edges().iter().any(|e| e == &vec![64, 65, 66, 67]));
}

#[test]
fn random_merges_stay_greechie() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let a = random_greechie(&mut rng, 7, 4, &[3, 4], 50).unwrap();
        let b = random_greechie(&mut rng, 6, 3, &[3], 50).unwrap();
        let g = merge(&a, &b).unwrap();
        assert!(g.grid.is_greechie().0);
        assert_eq!(g.grid.vertex_count(), 42);
        assert_eq!(g.grid.edge_count(), 6 * 4 + 7 * 3);
    }
}

#[test]
fn merging_triple_omps_gives_at_least_an_omp() {
    let en = enumerate_diagrams(
        &EnumerationTask::new(7, DiagramKind::Omp).uniform(3),
        &EnumerationOptions::default(),
    )
    .unwrap();
    assert!(en.diagrams.len() >= 4);
    for a in &en.diagrams {
        for b in &en.diagrams {
            let kind = merge(a, b).unwrap().grid.classify().kind;
            assert!(kind >= DiagramKind::Omp, "{a}\n--\n{b}");
        }
    }
}

#[test]
fn bare_merge_keeps_the_constant_measure() {
    let g = merge(&fano(), &ag23()).unwrap();
    let w = GroupMeasureWitness {
        p: 2,
        values: vec![1; 63],
        g: 1,
    };
    assert!(verify_group_measure(&g.grid, &w).unwrap());
    assert!(find_group_valued_measure(&g.grid).unwrap().is_some());
}

#[test]
fn bundled_diagonals_kill_every_measure() {
    let g = merge(&fano(), &ag23()).unwrap();
    let diagonals = bundled_grid_diagonals();
    let h = add_diagonal_edges(&g, &diagonals).unwrap();
    assert_eq!(h.edge_count(), 147 + diagonals.len());
    let analysis = analyze_group_measures(&h).unwrap();
    assert!(analysis.measure_free());
    assert_eq!(analysis.snf.rank, analysis.unknowns);
    assert!(find_probability_measure(&h).is_none());
}

#[test]
fn a_single_diagonal_is_accepted() {
    let g = merge(&fano(), &ag23()).unwrap();
    let diag = vec![g.id(1, 1), g.id(2, 2), g.id(3, 3), g.id(4, 4)];
    let h = add_diagonal_edges(&g, &[diag]).unwrap();
    assert_eq!(h.edge_count(), 148);
    let twice = vec![g.id(1, 1), g.id(2, 2), g.id(5, 3), g.id(6, 4)];
    let clash = vec![g.id(1, 1), g.id(2, 2), g.id(3, 5), g.id(4, 6)];
    assert!(matches!(
        add_diagonal_edges(&g, &[twice, clash]),
        Err(ConstructionError::SharedPair { index: 2, .. })
    ));
}

#[test]
fn search_reproduces_a_measure_free_grid() {
    let g = merge(&fano(), &ag23()).unwrap();
    let diagonals = search_diagonal_edges(&g, 4, SearchBudget::default()).unwrap();
    let h = add_diagonal_edges(&g, &diagonals).unwrap();
    assert!(analyze_group_measures(&h).unwrap().measure_free());
    assert!(find_probability_measure(&h).is_none());
}
