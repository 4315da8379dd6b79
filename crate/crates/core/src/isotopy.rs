//! Isotopism search between bitrades: three role-wise bijections carrying
//! star onto star and delta onto delta.

use std::collections::HashSet;

use crate::bitrade::{Bitrade, Role, Triple};

/// Label maps from the first bitrade into the second, indexed by role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isotopism {
    pub maps: [Vec<usize>; 3],
}

impl Isotopism {
    pub fn apply(&self, t: &Triple) -> Triple {
        Triple(Role::ALL.map(|r| self.maps[r.index()][t.get(r)]))
    }

    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.iter().enumerate().all(|(i, &j)| i == j))
    }
}

fn degree_profile(t: &Bitrade, role: Role) -> Vec<(usize, usize)> {
    // (star occurrences, number of τ cycles) per label
    let mut occ = vec![0usize; t.role_count(role)];
    for x in t.star() {
        occ[x.get(role)] += 1;
    }
    let mut cycles = vec![0usize; t.role_count(role)];
    let mut seen = vec![false; t.size()];
    for a in 0..t.size() {
        if seen[a] {
            continue;
        }
        for v in t.tau_cycle(role, a) {
            seen[v] = true;
        }
        cycles[t.star()[a].get(role)] += 1;
    }
    occ.into_iter().zip(cycles).collect()
}

/// Per-label invariants of the source and target.
type Profiles = (Vec<(usize, usize)>, Vec<(usize, usize)>);

struct Search<'a> {
    from: &'a Bitrade,
    to: &'a Bitrade,
    order: Vec<usize>,
    profiles: [Profiles; 3],
    maps: [Vec<Option<usize>>; 3],
    taken: [Vec<bool>; 3],
    to_delta: HashSet<Triple>,
}

impl Search<'_> {
    fn assign(&mut self, role: Role, x: usize, y: usize) -> Option<bool> {
        let r = role.index();
        match self.maps[r][x] {
            Some(v) => (v == y).then_some(false),
            None => {
                if self.taken[r][y] || self.profiles[r].0[x] != self.profiles[r].1[y] {
                    return None;
                }
                self.maps[r][x] = Some(y);
                self.taken[r][y] = true;
                Some(true)
            }
        }
    }

    fn undo(&mut self, role: Role, x: usize) {
        let r = role.index();
        if let Some(y) = self.maps[r][x].take() {
            self.taken[r][y] = false;
        }
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.from.delta().iter().all(|d| {
                let image = Triple(Role::ALL.map(|r| self.maps[r.index()][d.get(r)].expect("all labels mapped")));
                self.to_delta.contains(&image)
            });
        }
        let t = self.from.star()[self.order[depth]];
        for u in 0..self.to.size() {
            let target = self.to.star()[u];
            let mut fresh = Vec::new();
            let mut ok = true;
            for role in Role::ALL {
                match self.assign(role, t.get(role), target.get(role)) {
                    Some(true) => fresh.push(role),
                    Some(false) => {}
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.run(depth + 1) {
                return true;
            }
            for role in fresh {
                self.undo(role, t.get(role));
            }
        }
        false
    }
}

/// Searches for an isotopism from `from` to `to` by backtracking over star
/// triples, pruning on label degree and cycle structure.
pub fn is_isotopic(from: &Bitrade, to: &Bitrade) -> Option<Isotopism> {
    if from.size() != to.size()
        || from.delta().len() != to.delta().len()
        || Role::ALL.iter().any(|&r| from.role_count(r) != to.role_count(r))
    {
        return None;
    }
    let profiles = Role::ALL.map(|r| {
        let (mut a, mut b) = (degree_profile(from, r), degree_profile(to, r));
        let (pa, pb) = (a.clone(), b.clone());
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
        Some((pa, pb))
    });
    let [Some(p0), Some(p1), Some(p2)] = profiles else {
        return None;
    };

    // Visit star triples so that each one shares a label with an earlier one.
    let mut order = Vec::with_capacity(from.size());
    let mut placed = vec![false; from.size()];
    let mut seen_labels: [HashSet<usize>; 3] = Default::default();
    while order.len() < from.size() {
        let next = (0..from.size())
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let t = from.star()[i];
                let shared = Role::ALL.iter().filter(|r| seen_labels[r.index()].contains(&t.get(**r))).count();
                (shared, std::cmp::Reverse(i))
            })
            .expect("unplaced triple remains");
        placed[next] = true;
        let t = from.star()[next];
        for r in Role::ALL {
            seen_labels[r.index()].insert(t.get(r));
        }
        order.push(next);
    }

    let mut search = Search {
        from,
        to,
        order,
        profiles: [p0, p1, p2],
        maps: Role::ALL.map(|r| vec![None; from.role_count(r)]),
        taken: Role::ALL.map(|r| vec![false; to.role_count(r)]),
        to_delta: to.delta().iter().copied().collect(),
    };
    if !search.run(0) {
        return None;
    }
    let maps = search.maps.map(|m| m.into_iter().map(|v| v.expect("all labels mapped")).collect());
    Some(Isotopism { maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitrade::{build_bitrade, BitradeInput};
    use crate::corpus;

    fn check(from: &Bitrade, to: &Bitrade, iso: &Isotopism) {
        let mut star: Vec<Triple> = from.star().iter().map(|t| iso.apply(t)).collect();
        let mut delta: Vec<Triple> = from.delta().iter().map(|t| iso.apply(t)).collect();
        star.sort();
        delta.sort();
        assert_eq!(star, to.star());
        assert_eq!(delta, to.delta());
    }

    #[test]
    fn identity_on_self() {
        let t = corpus::example_4x5();
        let iso = is_isotopic(&t, &t).unwrap();
        check(&t, &t, &iso);
        assert!(is_isotopic(&corpus::intercalate(), &corpus::intercalate()).unwrap().is_identity());
    }

    #[test]
    fn row_swap_is_found() {
        let mut input = corpus::intercalate_input();
        input.universes[0] = Some(vec!["r1".into(), "r0".into()]);
        let swapped = build_bitrade(&input).unwrap();
        let t = corpus::intercalate();
        assert_ne!(t, swapped);
        let iso = is_isotopic(&t, &swapped).unwrap();
        check(&t, &swapped, &iso);
    }

    #[test]
    fn different_sizes_are_not_isotopic() {
        assert!(is_isotopic(&corpus::intercalate(), &corpus::example_4x5()).is_none());
    }

    #[test]
    fn star_and_delta_swapped_intercalate_is_isotopic() {
        let t = corpus::intercalate();
        let swapped = build_bitrade(&BitradeInput {
            universes: Default::default(),
            star: t.delta().iter().map(|x| t.triple_names(x)).collect(),
            delta: t.star().iter().map(|x| t.triple_names(x)).collect(),
        })
        .unwrap();
        let iso = is_isotopic(&t, &swapped).unwrap();
        check(&t, &swapped, &iso);
    }

    #[test]
    fn toroidal_star_and_delta_sides_differ() {
        assert!(is_isotopic(&corpus::toroidal_star(), &corpus::toroidal_delta()).is_none());
    }
}
