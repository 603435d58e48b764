//! Worked examples for every module, with values recomputed by small
//! independent scans where that is cheap.

mod common;

use std::collections::BTreeSet;

use dynlab_core::builders::{
    build_example, cantor, cantor_endpoints, circle_grid, cone, interval_grid, random_system, shift_to_limit,
    ExampleSpec,
};
use dynlab_core::decide::{
    decide_cg_shadowing, decide_eventual_shadowing, decide_shadowing, max_delta, shadowing_delta_from_convergence,
    shadowing_delta_from_rigidity, Budget, CgVerdict,
};
use dynlab_core::orbit::{bad_cantor_pseudo_orbit, build_step_graph, validate_chain, ChainError};
use dynlab_core::recurrence::{almost_periodic_bound, chain_classes, chain_reach, rigidity_defect};
use dynlab_core::space::validate_metric;
use dynlab_core::{q, FiniteMetricSpace, Rational, SystemMap};

fn labels(f: &SystemMap, pts: &[usize]) -> Vec<String> {
    pts.iter().map(|&p| f.space().label(p).to_string()).collect()
}

fn union_find_classes(space: &FiniteMetricSpace, h: &Rational) -> BTreeSet<Vec<usize>> {
    let n = space.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = root(p, p[x]);
            p[x] = r;
            r
        }
    }
    for a in 0..n {
        for b in 0..n {
            if space.dist(a, b) < h {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut classes = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for x in 0..n {
        let r = root(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    classes.into_values().collect()
}

#[test]
fn metric_validation_examples() {
    let labels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert!(validate_metric(&labels(&["0", "1"]), &[vec![q("0"), q("1")], vec![q("1"), q("0")]]).is_ok());
    let t = vec![
        vec![q("0"), q("1"), q("3")],
        vec![q("1"), q("0"), q("1")],
        vec![q("3"), q("1"), q("0")],
    ];
    assert!(validate_metric(&labels(&["a", "b", "c"]), &t).is_err());
    let z = vec![vec![q("0"), q("0")], vec![q("0"), q("0")]];
    assert!(validate_metric(&labels(&["a", "b"]), &z).is_err());
}

#[test]
fn spectra_balls_and_components() {
    let i4 = interval_grid(4).unwrap();
    let s = i4.space();
    assert_eq!(s.distance_spectrum(), ["0", "1/4", "1/2", "3/4", "1"].map(q));
    let e1 = cantor(1).unwrap();
    let scan: BTreeSet<Rational> = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| e1.space().dist(a, b).clone())
        .collect();
    assert_eq!(e1.space().distance_spectrum(), scan.into_iter().collect::<Vec<_>>());

    assert_eq!(s.ball(0, &q("1/4")).unwrap(), vec![0]);
    assert_eq!(labels(&i4, &s.ball(2, &q("3/8")).unwrap()), ["1/4", "1/2", "3/4"]);
    assert!(s.ball(2, &q("0")).unwrap().is_empty());

    for h in ["1/4", "3/10"] {
        let ours: BTreeSet<Vec<usize>> = s.h_components(&q(h)).into_iter().collect();
        assert_eq!(ours, union_find_classes(s, &q(h)));
    }
    assert_eq!(s.h_components(&q("1/4")).len(), 5);
    assert_eq!(s.h_components(&q("3/10")).len(), 1);

    let e2 = cantor(2).unwrap();
    let comps = e2.space().h_components(&q("1/3"));
    let named: Vec<Vec<String>> = comps.iter().map(|c| labels(&e2, c)).collect();
    assert_eq!(named, [vec!["0", "1/9", "2/9", "1/3"], vec!["2/3", "7/9", "8/9", "1"]]);
}

#[test]
fn clopen_cover_examples() {
    let i4 = interval_grid(4).unwrap();
    let cover = i4.space().clopen_cover(&q("1/8")).unwrap();
    assert_eq!(cover.blocks.len(), 5);
    assert_eq!(cover.max_diameter, q("0"));
    assert_eq!(cover.separation.finite(), Some(&q("1/4")));
    let cover = i4.space().clopen_cover(&q("1/2")).unwrap();
    assert_eq!(cover.separation.finite(), Some(&q("1/4")));

    let e2 = cantor(2).unwrap();
    let cover = e2.space().clopen_cover(&q("1/2")).unwrap();
    assert_eq!(cover.blocks.len(), 2);
    assert_eq!(cover.separation.finite(), Some(&q("1/3")));
    assert_eq!(cover.max_diameter, q("1/3"));
}

#[test]
fn system_examples() {
    let e1 = cantor(1).unwrap();
    let zero = SystemMap::constant(e1.space_arc().clone(), 0);
    assert_eq!(e1.rho_distance(&zero).unwrap(), q("1"));
    let r1 = circle_grid(4, &q("1/4")).unwrap();
    let r2 = circle_grid(4, &q("1/2")).unwrap();
    // grids built separately share no space handle
    let r2 = SystemMap::new(r1.space_arc().clone(), r2.image_table().to_vec()).unwrap();
    assert_eq!(r1.rho_distance(&r2).unwrap(), q("1/4"));

    assert_eq!(e1.continuity_modulus(&q("1/2"), 1).finite(), Some(&q("1/3")));
    assert_eq!(r1.continuity_modulus(&q("1/4"), 4).finite(), Some(&q("1/4")));

    let s = shift_to_limit(2).unwrap();
    let p = s.iterate_semigroup().unwrap();
    assert_eq!((p.tail_len, p.cycle_len, p.idempotent_exp), (3, 1, 3));
    assert_eq!(p.limit_constant, Some(0));
    assert_eq!(common::power_table(&s, 3), vec![0; 4]);
    let p = r1.iterate_semigroup().unwrap();
    assert_eq!((p.tail_len, p.cycle_len, p.idempotent_exp), (0, 4, 4));
    assert!(r1.iterate(4).is_identity());
}

#[test]
fn builder_examples() {
    let e2 = build_example(&ExampleSpec::Cantor { level: 2 }).unwrap();
    assert_eq!(
        e2.space().labels(),
        ["0", "1/9", "2/9", "1/3", "2/3", "7/9", "8/9", "1"]
    );
    for (x, y) in [("1/9", "1/3"), ("2/9", "2/3"), ("2/3", "0"), ("7/9", "0"), ("1", "0")] {
        let x = e2.space().point(x).unwrap();
        assert_eq!(e2.space().label(e2.apply(x)), y);
    }
    for m in 1..=4 {
        assert_eq!(cantor_endpoints(m).len(), 1 << (m + 1));
    }
    assert!(build_example(&ExampleSpec::Cantor { level: 0 }).is_err());
    assert!(build_example(&ExampleSpec::ShiftToLimit { k: 0 }).is_err());
    assert!(build_example(&ExampleSpec::CircleGrid {
        n: 4,
        rotation: q("1/3")
    })
    .is_err());
    let c = cone(&cantor(1).unwrap(), 3).unwrap();
    assert!(c.space().validate().is_ok());
    assert_eq!(random_system(1, 7, false).image_table(), &[0]);
}

#[test]
fn chain_and_graph_examples() {
    let t = cantor(2).unwrap();
    let ids = |v: &[&str]| v.iter().map(|l| t.space().point(l).unwrap()).collect::<Vec<_>>();
    assert!(validate_chain(&t, &ids(&["1/9", "1/3", "1"]), &q("1/9")).is_ok());
    assert_eq!(
        validate_chain(&t, &ids(&["1", "1/9"]), &q("1/9")),
        Err(ChainError::StepViolation { index: 0 })
    );
    assert!(validate_chain(&t, &ids(&["1", "1/9"]), &q("2/9")).is_ok());

    let fine = build_step_graph(&t, &q("1/9"));
    let scan: Vec<(usize, usize)> = (0..8).map(|x| (x, t.apply(x))).collect();
    assert_eq!(fine.edges().collect::<Vec<_>>(), scan);
    let coarse = build_step_graph(&t, &q("2/9"));
    let scan: Vec<(usize, usize)> = (0..8)
        .flat_map(|x| (0..8).map(move |y| (x, y)))
        .filter(|&(x, y)| t.space().dist(t.apply(x), y) < &q("2/9"))
        .collect();
    assert_eq!(coarse.edges().collect::<Vec<_>>(), scan);
}

#[test]
fn decider_examples() {
    let b = Budget::default();
    let e2 = cantor(2).unwrap();
    let id = SystemMap::identity(e2.space_arc().clone());
    assert!(decide_shadowing(&id, &q("1/2"), &q("1/3"), b).unwrap().is_yes());
    assert!(!decide_shadowing(&id, &q("1/2"), &q("4/9"), b).unwrap().is_yes());
    assert!(!decide_shadowing(&interval_grid(4).unwrap(), &q("1/2"), &q("1/2"), b)
        .unwrap()
        .is_yes());

    for m in 1..=4 {
        let t = cantor(m).unwrap();
        let ident = SystemMap::identity(t.space_arc().clone());
        assert_eq!(max_delta(&ident, &q("1/2"), b).unwrap().value, q("1/3"));
        assert_eq!(
            max_delta(&t, &q("1/2"), b).unwrap().value,
            Rational::pow(3, -(m as i32))
        );
    }

    let e1 = cantor(1).unwrap();
    assert!(decide_cg_shadowing(&e1, &q("1/2"), &q("1/3"), b).unwrap().is_yes());
    assert!(matches!(
        decide_cg_shadowing(&e1, &q("1/2"), &q("2/5"), b).unwrap(),
        CgVerdict::No { .. }
    ));
    assert!(!decide_eventual_shadowing(&e2, &q("1/2"), &q("2/9"), b)
        .unwrap()
        .is_yes());

    let bad = bad_cantor_pseudo_orbit(2, &q("2/9")).unwrap();
    assert_eq!(labels(&e2, bad.cycle()), ["1/9", "1/3", "1"]);
}

#[test]
fn constructive_examples() {
    let b = Budget::default();
    let r = circle_grid(4, &q("1/4")).unwrap();
    let c = shadowing_delta_from_rigidity(&r, &q("3/10")).unwrap().unwrap();
    assert_eq!((c.eta.clone(), c.iterate, c.delta.clone()), (q("1/4"), 4, q("1/4")));
    assert!(c.verify(&r, &q("3/10"), b).unwrap());
    assert!(shadowing_delta_from_rigidity(&cantor(2).unwrap(), &q("1/2"))
        .unwrap()
        .is_none());
    for k in [2, 3] {
        let s = shift_to_limit(k).unwrap();
        let c = shadowing_delta_from_convergence(&s, &q("1/2")).unwrap().unwrap();
        assert!(c.delta.is_positive());
        assert!(c.verify(&s, &q("1/2"), b).unwrap());
    }
}

#[test]
fn recurrence_examples() {
    let r = circle_grid(4, &q("1/4")).unwrap();
    assert_eq!(rigidity_defect(&r, 4).unwrap(), q("0"));
    assert_eq!(almost_periodic_bound(&r, 0, &q("1/8")), Some(4));
    assert_eq!(chain_reach(&r, 0, &q("1/8")), vec![0, 1, 2, 3]);
    let classes = chain_classes(&r, &q("1/8"));
    assert!(classes.len() == 1 && classes[0].minimal);

    for k in 2..=5 {
        let s = shift_to_limit(k).unwrap();
        assert_eq!(rigidity_defect(&s, 4 << k).unwrap(), q("1"));
        assert_eq!(
            max_delta(&s, &q("1/4"), Budget::default()).unwrap().value,
            Rational::pow(2, -(k as i32))
        );
    }
}
