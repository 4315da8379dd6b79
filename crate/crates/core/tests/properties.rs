use bitrade::arith::Rational;
use bitrade::corpus;
use bitrade::dissection::{dissect, extract_bitrade, triangles};
use bitrade::group::{
    canonical_images, check_det_invariance, integer_homotopy_rank, is_abelian_embeddable, presentation, subgroup_h,
};
use bitrade::homotopy::induced_homotopy;
use bitrade::isotopy::is_isotopic;
use bitrade::system::{solve_pointed, PointedBitrade, Solution};
use bitrade::trigon::{
    brute_force_trigons, embed_product, find_trigons, graft, inner_circumference, recombine, separate, shrink_pairs,
    split,
};
use bitrade::{Bitrade, Role, Triple};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn steps() -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
    prop::collection::vec((0..3usize, 0..64usize, 0..16usize), 1..=4)
}

fn degenerate(sol: &Solution, d: &Triple) -> bool {
    sol.values[0][d.row()].clone() + &sol.values[1][d.col()] == sol.values[2][d.sym()]
}

fn is_vertex(p: &(Rational, Rational)) -> bool {
    let (x, y) = p;
    (x.is_zero() && y.is_zero()) || (x.is_one() && y.is_zero()) || (x.is_zero() && y.is_one())
}

fn check_solution_geometry(t: &Bitrade, sol: &Solution) {
    let a = sol.pivot_triple;
    let w = sol.width();
    assert!(w >= 2);
    for tri in triangles(t, sol) {
        if !tri.is_degenerate() {
            assert!(tri.is_contained(), "non-degenerate triangle leaves the frame");
        }
    }
    for (bi, b) in t.star().iter().enumerate() {
        if bi == sol.pivot {
            continue;
        }
        let p = sol.point(b);
        assert!(!is_vertex(&p), "{} sits at a frame vertex", t.format_triple(b));
        for (i, j) in [(Role::Row, Role::Col), (Role::Row, Role::Sym), (Role::Col, Role::Sym)] {
            let found = t.delta().iter().any(|c| {
                !degenerate(sol, c)
                    && sol.value(c.label(i)) == sol.value(b.label(i))
                    && sol.value(c.label(j)) == sol.value(b.label(j))
            });
            assert!(found, "no non-degenerate mate for {} on ({i},{j})", t.format_triple(b));
        }
    }
    for (b, i) in shrink_pairs(t, sol) {
        let bi = t.star()[b].get(i);
        assert_ne!(bi, a.get(i));
        for c in t.delta().iter().filter(|c| c.get(i) == bi) {
            assert!(degenerate(sol, c), "{} should degenerate", t.format_triple(c));
        }
    }
}

fn check_pivots(t: &Bitrade) {
    for a in 0..t.size() {
        let sol = solve_pointed(t, a).expect("spherical systems are uniquely solvable");
        let h = induced_homotopy(t, &sol).expect("separation biconditional");
        assert_eq!(h.modulus(), sol.width());
        check_solution_geometry(t, &sol);
        if sol.is_separated() {
            let p = PointedBitrade { bitrade: t.clone(), pivot: a };
            let d = dissect(&p).expect("separated solutions dissect");
            assert!(d.report.is_dissection && d.report.is_separated_dissection);
            assert_eq!(d.report.area_total, "1/2");
            let back = extract_bitrade(&d.triangles).expect("dissections extract");
            assert!(is_isotopic(&back.bitrade, t).is_some());
        }
    }
}

fn check_groups(t: &Bitrade) {
    let r = integer_homotopy_rank(t);
    assert_eq!((r.nullity, r.rank), (2, t.metrics().m - 2));
    let g = presentation(t);
    assert_eq!(g.free_rank, 2);
    let h = subgroup_h(t);
    assert!(h.is_finite());
    assert_eq!(h, g.torsion());
    assert!(is_abelian_embeddable(t).embeddable);
    let d = check_det_invariance(t).expect("square minors");
    assert!(d.all_equal && d.nonzero, "determinants {:?}", d.distinct_values);
    canonical_images(t);
}

fn check_trigons(t: &Bitrade) {
    let tgs = find_trigons(t).unwrap();
    let brute = brute_force_trigons(t);
    assert_eq!(tgs.iter().map(|tg| tg.c).collect::<Vec<_>>(), brute);
    for tg in &tgs {
        for j in 0..3 {
            assert!(2 <= tg.k[j] && tg.k[j] < tg.cycle_len[j]);
        }
        inner_circumference(t, tg).unwrap();
        let sp = split(t, tg).unwrap();
        assert_eq!(sp.inner.size() + sp.outer.size(), t.size() + 1);
        assert!(sp.inner.is_spherical() && sp.outer.is_spherical());
        assert!(sp.outer.delta().len() + 2 <= t.delta().len());
        let phi = induced_homotopy(&sp.outer, &solve_pointed(&sp.outer, 0).unwrap()).unwrap();
        let lifted = recombine(t, tg, &sp, &phi).unwrap();
        lifted.check_law(t).unwrap();
    }
}

fn check_separation(t: &Bitrade, budget: usize) {
    let mut done = 0;
    for a in 0..t.size() {
        let sol = solve_pointed(t, a).unwrap();
        for (b, i) in shrink_pairs(t, &sol) {
            if done == budget {
                return;
            }
            done += 1;
            let s = separate(t, a, b, i).unwrap();
            s.homotopy.check_law(t).unwrap();
            assert!(s.homotopy.separates(i, t.star()[a].get(i), t.star()[b].get(i)));
            assert!(s.depth >= 1);
            assert!(s.trace.windows(2).all(|w| w[1].size < w[0].size));
        }
    }
}

fn check_embedding(t: &Bitrade) {
    let e = embed_product(t).unwrap();
    assert!(e.is_injective(t));
    for f in &e.factors {
        f.homotopy.check_law(t).unwrap();
    }
}

#[test]
fn corpus_instances_satisfy_every_invariant() {
    for (name, t) in corpus::spherical() {
        eprintln!("{name}");
        check_pivots(&t);
        check_groups(&t);
        check_trigons(&t);
        check_separation(&t, usize::MAX);
        check_embedding(&t);
    }
}

#[test]
fn graft_then_split_recovers_the_pieces() {
    let outer = corpus::example_4x5();
    let inner = corpus::intercalate();
    let g = graft(&outer, 3, &inner, 1).unwrap();
    assert!(g.is_spherical());
    let c = outer.delta()[3];
    let c = g.triple_from_names(outer.triple_names(&c).each_ref().map(String::as_str)).unwrap();
    let tg = find_trigons(&g).unwrap().into_iter().find(|tg| tg.c == c).expect("grafted face is a trigon");
    let sp = split(&g, &tg).unwrap();
    assert!(is_isotopic(&sp.outer, &outer).is_some());
    assert!(is_isotopic(&sp.inner, &inner).is_some());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn grafted_instances_are_spherical_and_separated(s in steps()) {
        let t = corpus::grafted(&s);
        prop_assert!(t.is_spherical());
        prop_assert!(t.is_separated());
        prop_assert!(!find_trigons(&t).unwrap().is_empty());
    }

    #[test]
    fn grafted_pivots(s in steps()) {
        check_pivots(&corpus::grafted(&s));
    }

    #[test]
    fn grafted_groups(s in steps()) {
        check_groups(&corpus::grafted(&s));
    }

    #[test]
    fn grafted_trigons(s in steps()) {
        check_trigons(&corpus::grafted(&s));
    }

    #[test]
    fn grafted_separation(s in steps()) {
        let t = corpus::grafted(&s);
        check_separation(&t, 12);
        check_embedding(&t);
    }
}
