//! Latin bitrades `(T*, T△)`: construction, axiom checking, the `μ`/`ν`/`τ`
//! permutations and the semidual surface metrics.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coordinate of a triple. Rows, columns and symbols live in separate label
/// spaces, so a row can never be confused with a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Row,
    Col,
    Sym,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Row, Role::Col, Role::Sym];

    pub fn index(self) -> usize {
        match self {
            Role::Row => 0,
            Role::Col => 1,
            Role::Sym => 2,
        }
    }

    pub fn from_index(i: usize) -> Role {
        Role::ALL[i % 3]
    }

    /// `j + 1` in the cyclic order row → col → sym → row.
    pub fn next(self) -> Role {
        Role::from_index(self.index() + 1)
    }

    /// `j − 1` in the cyclic order.
    pub fn prev(self) -> Role {
        Role::from_index(self.index() + 2)
    }

    /// The two roles other than `self`, in increasing order.
    pub fn others(self) -> (Role, Role) {
        match self {
            Role::Row => (Role::Col, Role::Sym),
            Role::Col => (Role::Row, Role::Sym),
            Role::Sym => (Role::Row, Role::Col),
        }
    }

    /// The role different from both `a` and `b`.
    pub fn third(a: Role, b: Role) -> Role {
        assert_ne!(a, b, "third role of a repeated pair");
        Role::from_index(3 - a.index() - b.index())
    }

    /// Parses `row|col|sym` or the 1-based coordinate `1|2|3`.
    pub fn parse(s: &str) -> Option<Role> {
        match s.trim().to_ascii_lowercase().as_str() {
            "row" | "rows" | "r" | "1" => Some(Role::Row),
            "col" | "cols" | "column" | "c" | "2" => Some(Role::Col),
            "sym" | "syms" | "symbol" | "s" | "3" => Some(Role::Sym),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Row => "row",
            Role::Col => "col",
            Role::Sym => "sym",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A role-tagged label index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub role: Role,
    pub index: usize,
}

impl Label {
    pub fn new(role: Role, index: usize) -> Self {
        Label { role, index }
    }
}

/// A triple of label indices `(row, col, sym)`. The derived order is the
/// canonical `(row, col)` lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple(pub [usize; 3]);

impl Triple {
    pub fn new(row: usize, col: usize, sym: usize) -> Self {
        Triple([row, col, sym])
    }

    pub fn row(&self) -> usize {
        self.0[0]
    }

    pub fn col(&self) -> usize {
        self.0[1]
    }

    pub fn sym(&self) -> usize {
        self.0[2]
    }

    pub fn get(&self, role: Role) -> usize {
        self.0[role.index()]
    }

    pub fn label(&self, role: Role) -> Label {
        Label::new(role, self.get(role))
    }

    pub fn with(mut self, role: Role, value: usize) -> Triple {
        self.0[role.index()] = value;
        self
    }

    /// Number of coordinates in which `self` and `other` agree.
    pub fn agreement(&self, other: &Triple) -> usize {
        (0..3).filter(|&i| self.0[i] == other.0[i]).count()
    }

    fn key_without(&self, omit: Role) -> (usize, usize) {
        let (a, b) = omit.others();
        (self.get(a), self.get(b))
    }
}

/// Which of the defining axioms failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    R1,
    R2,
    R3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitradeError {
    #[error("bitrade input is empty")]
    EmptyInput,
    #[error("duplicate triple ({}, {}, {}) in {}", .triple[0], .triple[1], .triple[2], if *.in_star { "star" } else { "delta" })]
    DuplicateTriple { triple: [String; 3], in_star: bool },
    #[error("label {name:?} is listed twice among the {role} labels")]
    DuplicateLabel { role: Role, name: String },
    #[error("triple uses undeclared {role} label {name:?}")]
    UnknownLabel { role: Role, name: String },
    #[error("{role} label {name:?} occurs in no star triple")]
    UnusedLabel { role: Role, name: String },
    #[error("axiom {axiom} violated at ({}, {}, {}){}: {found} partner(s) found", .triple[0], .triple[1], .triple[2], pair_suffix(.pair))]
    AxiomViolation { axiom: Axiom, triple: [String; 3], pair: Option<(Role, Role)>, found: usize },
    #[error("indecomposable input has m = {m} > s + 2 = {}", .s + 2)]
    EulerBound { m: usize, s: usize },
}

fn pair_suffix(pair: &Option<(Role, Role)>) -> String {
    match pair {
        Some((a, b)) => format!(" for coordinates ({a}, {b})"),
        None => String::new(),
    }
}

/// Raw input: optional explicit universes plus star and delta triples of
/// label names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitradeInput {
    pub universes: [Option<Vec<String>>; 3],
    pub star: Vec<[String; 3]>,
    pub delta: Vec<[String; 3]>,
}

impl BitradeInput {
    pub fn from_triples<S: AsRef<str>>(star: &[[S; 3]], delta: &[[S; 3]]) -> Self {
        let conv = |ts: &[[S; 3]]| {
            ts.iter().map(|t| [t[0].as_ref().to_owned(), t[1].as_ref().to_owned(), t[2].as_ref().to_owned()]).collect()
        };
        BitradeInput { universes: [None, None, None], star: conv(star), delta: conv(delta) }
    }
}

/// Surface and size statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size: usize,
    pub role_counts: [usize; 3],
    pub m: usize,
    pub euler_characteristic: i64,
    pub indecomposable: bool,
    pub separated: bool,
    pub spherical: bool,
    /// `None` when the semidual is only a pseudosurface.
    pub genus: Option<i64>,
}

/// A validated latin bitrade. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Bitrade {
    names: [Vec<String>; 3],
    star: Vec<Triple>,
    delta: Vec<Triple>,
    // Keyed by the omitted coordinate: `star_index[k]` maps the pair of
    // coordinates other than `k` to a star position.
    star_index: [HashMap<(usize, usize), usize>; 3],
    delta_index: [HashMap<(usize, usize), usize>; 3],
    star_pos: HashMap<Triple, usize>,
    delta_pos: HashMap<Triple, usize>,
    metrics: Metrics,
}

impl PartialEq for Bitrade {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.star == other.star && self.delta == other.delta
    }
}

impl Eq for Bitrade {}

/// Builds and validates a bitrade from named triples.
pub fn build_bitrade(input: &BitradeInput) -> Result<Bitrade, BitradeError> {
    if input.star.is_empty() || input.delta.is_empty() {
        return Err(BitradeError::EmptyInput);
    }
    let mut names: [Vec<String>; 3] = Default::default();
    let mut lookup: [HashMap<String, usize>; 3] = Default::default();
    let explicit = input.universes.iter().map(Option::is_some).collect::<Vec<_>>();
    for role in Role::ALL {
        if let Some(list) = &input.universes[role.index()] {
            for name in list {
                if lookup[role.index()].insert(name.clone(), names[role.index()].len()).is_some() {
                    return Err(BitradeError::DuplicateLabel { role, name: name.clone() });
                }
                names[role.index()].push(name.clone());
            }
        }
    }
    let mut intern = |t: &[String; 3]| -> Result<Triple, BitradeError> {
        let mut idx = [0usize; 3];
        for role in Role::ALL {
            let r = role.index();
            let name = &t[r];
            idx[r] = match lookup[r].get(name) {
                Some(&i) => i,
                None if explicit[r] => return Err(BitradeError::UnknownLabel { role, name: name.clone() }),
                None => {
                    let i = names[r].len();
                    lookup[r].insert(name.clone(), i);
                    names[r].push(name.clone());
                    i
                }
            };
        }
        Ok(Triple(idx))
    };
    let star = input.star.iter().map(&mut intern).collect::<Result<Vec<_>, _>>()?;
    let delta = input.delta.iter().map(&mut intern).collect::<Result<Vec<_>, _>>()?;
    Bitrade::from_parts(names, star, delta)
}

impl Bitrade {
    /// Validates index-level triples over the given label names.
    pub fn from_parts(
        names: [Vec<String>; 3],
        mut star: Vec<Triple>,
        mut delta: Vec<Triple>,
    ) -> Result<Bitrade, BitradeError> {
        if star.is_empty() || delta.is_empty() {
            return Err(BitradeError::EmptyInput);
        }
        let named = |t: &Triple| -> [String; 3] {
            [names[0][t.row()].clone(), names[1][t.col()].clone(), names[2][t.sym()].clone()]
        };
        star.sort();
        delta.sort();
        for (set, in_star) in [(&star, true), (&delta, false)] {
            if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
                return Err(BitradeError::DuplicateTriple { triple: named(&w[0]), in_star });
            }
        }

        let star_set: HashSet<Triple> = star.iter().copied().collect();
        if let Some(t) = delta.iter().find(|t| star_set.contains(t)) {
            return Err(BitradeError::AxiomViolation { axiom: Axiom::R1, triple: named(t), pair: None, found: 1 });
        }

        let multi = |set: &[Triple], omit: Role| {
            let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
            for (i, t) in set.iter().enumerate() {
                m.entry(t.key_without(omit)).or_default().push(i);
            }
            m
        };
        let star_multi = Role::ALL.map(|r| multi(&star, r));
        let delta_multi = Role::ALL.map(|r| multi(&delta, r));

        for (axiom, from, to) in [(Axiom::R2, &star, &delta_multi), (Axiom::R3, &delta, &star_multi)] {
            for t in from.iter() {
                for omit in [Role::Sym, Role::Col, Role::Row] {
                    let found = to[omit.index()].get(&t.key_without(omit)).map_or(0, Vec::len);
                    if found != 1 {
                        return Err(BitradeError::AxiomViolation {
                            axiom,
                            triple: named(t),
                            pair: Some(omit.others()),
                            found,
                        });
                    }
                }
            }
        }

        let mut used = [vec![false; names[0].len()], vec![false; names[1].len()], vec![false; names[2].len()]];
        for t in &star {
            for r in 0..3 {
                used[r][t.0[r]] = true;
            }
        }
        for role in Role::ALL {
            if let Some(i) = used[role.index()].iter().position(|u| !u) {
                return Err(BitradeError::UnusedLabel { role, name: names[role.index()][i].clone() });
            }
        }

        let flatten = |m: HashMap<(usize, usize), Vec<usize>>| -> HashMap<(usize, usize), usize> {
            m.into_iter().map(|(k, v)| (k, v[0])).collect()
        };
        let [s0, s1, s2] = star_multi;
        let [d0, d1, d2] = delta_multi;
        let star_pos = star.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let delta_pos = delta.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let mut bitrade = Bitrade {
            names,
            star,
            delta,
            star_index: [flatten(s0), flatten(s1), flatten(s2)],
            delta_index: [flatten(d0), flatten(d1), flatten(d2)],
            star_pos,
            delta_pos,
            metrics: Metrics {
                size: 0,
                role_counts: [0; 3],
                m: 0,
                euler_characteristic: 0,
                indecomposable: false,
                separated: false,
                spherical: false,
                genus: None,
            },
        };
        bitrade.metrics = bitrade.compute_metrics();
        let mt = &bitrade.metrics;
        if mt.indecomposable && mt.m > mt.size + 2 {
            return Err(BitradeError::EulerBound { m: mt.m, s: mt.size });
        }
        Ok(bitrade)
    }

    pub fn size(&self) -> usize {
        self.star.len()
    }

    pub fn star(&self) -> &[Triple] {
        &self.star
    }

    pub fn delta(&self) -> &[Triple] {
        &self.delta
    }

    pub fn names(&self, role: Role) -> &[String] {
        &self.names[role.index()]
    }

    pub fn all_names(&self) -> &[Vec<String>; 3] {
        &self.names
    }

    pub fn role_count(&self, role: Role) -> usize {
        self.names[role.index()].len()
    }

    pub fn name(&self, label: Label) -> &str {
        &self.names[label.role.index()][label.index]
    }

    pub fn label_index(&self, role: Role, name: &str) -> Option<usize> {
        self.names[role.index()].iter().position(|n| n == name)
    }

    pub fn triple_names(&self, t: &Triple) -> [String; 3] {
        [self.names[0][t.row()].clone(), self.names[1][t.col()].clone(), self.names[2][t.sym()].clone()]
    }

    pub fn format_triple(&self, t: &Triple) -> String {
        let [r, c, s] = self.triple_names(t);
        format!("({r},{c},{s})")
    }

    /// Resolves a triple of names against the label universes.
    pub fn triple_from_names(&self, names: [&str; 3]) -> Option<Triple> {
        Some(Triple::new(
            self.label_index(Role::Row, names[0])?,
            self.label_index(Role::Col, names[1])?,
            self.label_index(Role::Sym, names[2])?,
        ))
    }

    pub fn star_position(&self, t: &Triple) -> Option<usize> {
        self.star_pos.get(t).copied()
    }

    pub fn delta_position(&self, t: &Triple) -> Option<usize> {
        self.delta_pos.get(t).copied()
    }

    /// The unique star triple agreeing with `t` in the two coordinates other
    /// than `omit`, if any.
    pub fn star_agreeing(&self, t: &Triple, omit: Role) -> Option<usize> {
        self.star_index[omit.index()].get(&t.key_without(omit)).copied()
    }

    /// The unique delta triple agreeing with `t` in the two coordinates other
    /// than `omit`, if any.
    pub fn delta_agreeing(&self, t: &Triple, omit: Role) -> Option<usize> {
        self.delta_index[omit.index()].get(&t.key_without(omit)).copied()
    }

    fn star_partner(&self, t: &Triple, omit: Role) -> usize {
        self.star_agreeing(t, omit).expect("R3 guarantees a star partner")
    }

    fn delta_partner(&self, t: &Triple, omit: Role) -> usize {
        self.delta_agreeing(t, omit).expect("R2 guarantees a delta partner")
    }

    /// `μ_{r,s}` on delta positions: step to the star triple that differs at
    /// `s`, then to the delta triple that differs from it at `r`.
    pub fn mu(&self, r: Role, s: Role, c: usize) -> usize {
        assert_ne!(r, s);
        let d = self.star_partner(&self.delta[c], s);
        self.delta_partner(&self.star[d], r)
    }

    /// `ν_{r,s}` on star positions, dual to [`Bitrade::mu`].
    pub fn nu(&self, r: Role, s: Role, a: usize) -> usize {
        assert_ne!(r, s);
        let b = self.delta_partner(&self.star[a], s);
        self.star_partner(&self.delta[b], r)
    }

    /// `τ_j = ν_{j+1,j−1}`; its cycles are the cyclic faces of role `j`.
    pub fn tau(&self, j: Role, a: usize) -> usize {
        self.nu(j.next(), j.prev(), a)
    }

    pub fn tau_inv(&self, j: Role, a: usize) -> usize {
        self.nu(j.prev(), j.next(), a)
    }

    /// The orbit of `a` under `τ_j`, starting at `a`.
    pub fn tau_cycle(&self, j: Role, a: usize) -> Vec<usize> {
        let mut cycle = vec![a];
        let mut x = self.tau(j, a);
        while x != a {
            cycle.push(x);
            x = self.tau(j, x);
        }
        cycle
    }

    /// Star positions of the three vertices of the triangular face of a
    /// delta triple, ordered by the coordinate in which they differ.
    pub fn triangular_face(&self, c: usize) -> [usize; 3] {
        let t = &self.delta[c];
        Role::ALL.map(|omit| self.star_partner(t, omit))
    }

    /// Connectivity of the graph joining star and delta triples that agree
    /// in exactly two coordinates.
    pub fn is_indecomposable(&self) -> bool {
        self.metrics.indecomposable
    }

    /// Every label's star triples form a single `τ` cycle.
    pub fn is_separated(&self) -> bool {
        self.metrics.separated
    }

    pub fn is_spherical(&self) -> bool {
        self.metrics.spherical
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    fn connected(&self) -> bool {
        let s = self.star.len();
        let mut seen = vec![false; s + self.delta.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            let neighbours: [usize; 3] = if v < s {
                Role::ALL.map(|omit| s + self.delta_partner(&self.star[v], omit))
            } else {
                Role::ALL.map(|omit| self.star_partner(&self.delta[v - s], omit))
            };
            for w in neighbours {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == seen.len()
    }

    fn separated_scan(&self) -> bool {
        for j in Role::ALL {
            let mut counts = vec![0usize; self.role_count(j)];
            for t in &self.star {
                counts[t.get(j)] += 1;
            }
            let mut visited = vec![false; self.role_count(j)];
            for (a, t) in self.star.iter().enumerate() {
                let label = t.get(j);
                if visited[label] {
                    continue;
                }
                visited[label] = true;
                if self.tau_cycle(j, a).len() != counts[label] {
                    return false;
                }
            }
        }
        true
    }

    fn compute_metrics(&self) -> Metrics {
        let size = self.star.len();
        let role_counts = Role::ALL.map(|r| self.role_count(r));
        let m: usize = role_counts.iter().sum();
        let euler = m as i64 - size as i64;
        let indecomposable = self.connected();
        let separated = self.separated_scan();
        let genus = (separated && euler <= 2 && (2 - euler) % 2 == 0).then(|| (2 - euler) / 2);
        Metrics {
            size,
            role_counts,
            m,
            euler_characteristic: euler,
            indecomposable,
            separated,
            spherical: indecomposable && m == size + 2,
            genus,
        }
    }

    /// The full semidual: cyclic faces per label and triangular faces per
    /// delta triple.
    pub fn semidual_faces(&self) -> Result<SemidualFaces, NotSeparated> {
        if !self.is_separated() {
            return Err(NotSeparated);
        }
        let mut cyclic = Vec::new();
        for j in Role::ALL {
            let mut first = vec![None; self.role_count(j)];
            for (a, t) in self.star.iter().enumerate() {
                first[t.get(j)].get_or_insert(a);
            }
            for (index, start) in first.into_iter().enumerate() {
                let start = start.expect("every label occurs in a star triple");
                cyclic.push(CyclicFace { label: Label::new(j, index), cycle: self.tau_cycle(j, start) });
            }
        }
        let triangular = (0..self.delta.len()).map(|c| self.triangular_face(c)).collect();
        Ok(SemidualFaces { cyclic, triangular })
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("bitrade is not separated")]
pub struct NotSeparated;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFace {
    pub label: Label,
    /// Star positions in `τ_j` order.
    pub cycle: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidualFaces {
    pub cyclic: Vec<CyclicFace>,
    /// Indexed by delta position.
    pub triangular: Vec<[usize; 3]>,
}

impl SemidualFaces {
    pub fn vertex_count(&self) -> usize {
        self.triangular.len()
    }

    pub fn edge_count(&self) -> usize {
        self.cyclic.iter().map(|f| f.cycle.len()).sum()
    }

    pub fn face_count(&self) -> usize {
        self.cyclic.len() + self.triangular.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }
}
