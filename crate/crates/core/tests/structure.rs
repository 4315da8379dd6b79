use bitrade::corpus;
use bitrade::isotopy::is_isotopic;
use bitrade::{build_bitrade, Bitrade, BitradeInput, Role};
use proptest::prelude::*;

fn instances() -> Vec<Bitrade> {
    let mut v: Vec<Bitrade> = corpus::spherical().into_iter().map(|(_, t)| t).collect();
    v.push(corpus::toroidal_star());
    v.push(corpus::toroidal_delta());
    v
}

fn check_permutations(t: &Bitrade) {
    for c in 0..t.size() {
        for r in Role::ALL {
            for s in Role::ALL.into_iter().filter(|&s| s != r) {
                assert_eq!(t.mu(s, r, t.mu(r, s, c)), c);
                assert_eq!(t.nu(s, r, t.nu(r, s, c)), c);
            }
        }
        assert_eq!(t.tau(Role::Row, t.tau(Role::Col, t.tau(Role::Sym, c))), c);
        for j in Role::ALL {
            assert_eq!(t.tau_inv(j, t.tau(j, c)), c);
        }
    }
    let m = t.metrics();
    if m.indecomposable {
        assert!(m.m <= m.size + 2);
    }
}

/// Permutation of `0..n` obtained by sorting on a seeded key.
fn permutation(n: usize, seed: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| ((i + 1) * 7919 + seed * 104_729) % 10_007);
    idx
}

/// Renames every label through a seeded permutation and rotates the triple
/// lists.
fn relabel(t: &Bitrade, seed: &[usize; 6]) -> Bitrade {
    let perms = Role::ALL.map(|r| permutation(t.role_count(r), seed[r.index()]));
    let names = |x: &bitrade::Triple| Role::ALL.map(|r| format!("{}{}", r.name(), perms[r.index()][x.get(r)]));
    let mut star: Vec<[String; 3]> = t.star().iter().map(names).collect();
    let mut delta: Vec<[String; 3]> = t.delta().iter().map(names).collect();
    let (ns, nd) = (star.len(), delta.len());
    star.rotate_left(seed[3] % ns);
    delta.rotate_left(seed[4] % nd);
    if seed[5] % 2 == 1 {
        star.reverse();
    }
    build_bitrade(&BitradeInput { universes: Default::default(), star, delta }).unwrap()
}

#[test]
fn corpus_permutation_identities() {
    for t in instances() {
        check_permutations(&t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn grafted_permutation_identities(s in prop::collection::vec((0..3usize, 0..64usize, 0..16usize), 0..=4)) {
        check_permutations(&corpus::grafted(&s));
    }

    #[test]
    fn isotopisms_reproduce_the_target(
        s in prop::collection::vec((0..3usize, 0..64usize, 0..16usize), 0..=2),
        seed in prop::array::uniform6(0..1000usize),
    ) {
        let t = corpus::grafted(&s);
        let u = relabel(&t, &seed);
        let iso = is_isotopic(&t, &u).expect("relabelling is an isotopy");
        let mut star: Vec<_> = t.star().iter().map(|x| iso.apply(x)).collect();
        let mut delta: Vec<_> = t.delta().iter().map(|x| iso.apply(x)).collect();
        star.sort();
        delta.sort();
        prop_assert_eq!(star.as_slice(), u.star());
        prop_assert_eq!(delta.as_slice(), u.delta());
    }
}
