//! Trigons, their inner circumference, the inner/outer split, homotopy
//! recombination and the separation recursion leading to embeddings into
//! finite abelian groups.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bitrade::{build_bitrade, Bitrade, BitradeError, BitradeInput, Label, Role, Triple};
use crate::homotopy::{induced_homotopy, Homotopy, HomotopyError};
use crate::system::{column_of, solve_pointed, Solution, SystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrigonError {
    #[error("bitrade is not separated")]
    NotSeparated,
    #[error("bitrade is not spherical")]
    NotSpherical,
    #[error("{0} is not a trigon")]
    NotATrigon(String),
    #[error("splice identity fails at the {0} seam")]
    SpliceIdentityFailure(Role),
    #[error("inner circumference does not separate the corner faces from the inside ({0} components)")]
    CircumferenceDoesNotSeparate(usize),
    #[error("{side} bitrade is invalid: {error}")]
    SplitInvalid { side: &'static str, error: BitradeError },
    #[error("{side} bitrade is not spherical")]
    SplitNotSpherical { side: &'static str },
    #[error("{0} is not in the shrink situation")]
    NotInShrinkSituation(String),
    #[error("trigon location invariant broken: {0}")]
    LocateInvariant(String),
    #[error("{0}")]
    ArgumentError(String),
    #[error("recombined values disagree on {0}")]
    InconsistentRecombination(String),
    #[error("{0} is not an outer point of the located trigon")]
    NotOuter(String),
    #[error("modulus overflow in recombination")]
    Overflow,
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

/// A trigon `c ∉ T*` with its corner triples `γ_j ∈ T△` and vertex points
/// `α_j ∈ T*`, each differing from `c` exactly at coordinate `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trigon {
    pub c: Triple,
    /// Delta positions of `γ_1, γ_2, γ_3`.
    pub corners: [usize; 3],
    /// Star positions of `α_1, α_2, α_3`.
    pub alphas: [usize; 3],
    /// `τ_j^{k_j}(α_{j−1}) = α_{j+1}`.
    pub k: [usize; 3],
    /// Length of the `τ_j` cycle through `α_{j±1}`.
    pub cycle_len: [usize; 3],
}

fn is_trigon_triple(t: &Bitrade, c: &Triple) -> bool {
    t.star_position(c).is_none()
        && Role::ALL.iter().all(|&j| t.delta_agreeing(c, j).is_some_and(|d| t.delta()[d] != *c))
}

/// Checks the definition at `c` and computes the vertex points and arc
/// lengths.
pub fn trigon_at(t: &Bitrade, c: &Triple) -> Option<Trigon> {
    if !is_trigon_triple(t, c) {
        return None;
    }
    let corners = Role::ALL.map(|j| t.delta_agreeing(c, j).expect("corner checked"));
    let alphas = Role::ALL.map(|j| t.star_agreeing(c, j).expect("R3 gives a star partner of each corner"));
    let mut k = [0; 3];
    let mut cycle_len = [0; 3];
    for j in Role::ALL {
        let from = alphas[j.prev().index()];
        let to = alphas[j.next().index()];
        let cycle = t.tau_cycle(j, from);
        let steps = cycle.iter().position(|&v| v == to)?;
        assert!(2 <= steps && steps < cycle.len(), "arc length {steps} outside [2, {})", cycle.len());
        k[j.index()] = steps;
        cycle_len[j.index()] = cycle.len();
    }
    Some(Trigon { c: *c, corners, alphas, k, cycle_len })
}

/// Every trigon of a separated bitrade, in canonical triple order.
///
/// Candidates come from joining delta triples: `(c₁,c₂)` from a triple of
/// `T△` and `c₃` from a triple sharing the row `c₁`.
pub fn find_trigons(t: &Bitrade) -> Result<Vec<Trigon>, TrigonError> {
    if !t.is_separated() {
        return Err(TrigonError::NotSeparated);
    }
    let mut by_row: Vec<Vec<&Triple>> = vec![Vec::new(); t.role_count(Role::Row)];
    for d in t.delta() {
        by_row[d.row()].push(d);
    }
    let mut candidates = BTreeSet::new();
    for g3 in t.delta() {
        for g2 in &by_row[g3.row()] {
            if g2.col() != g3.col() && g2.sym() != g3.sym() {
                candidates.insert(Triple::new(g3.row(), g3.col(), g2.sym()));
            }
        }
    }
    Ok(candidates.iter().filter_map(|c| trigon_at(t, c)).collect())
}

/// The arcs of the path `P`, the seams `β_j`, the replacement arcs `Q_j` and
/// the closed inner circumference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigonCircumference {
    /// `arcs[j]` runs `α_{j−1}, τ_j(α_{j−1}), …, α_{j+1}`.
    pub arcs: [Vec<usize>; 3],
    pub betas: [usize; 3],
    /// `q[j]` runs `β_j, τ_j(β_j), …, τ_{j+1}(α_j)`.
    pub q: [Vec<usize>; 3],
    /// Length of the `τ_j` cycle through `β_j`.
    pub h: [usize; 3],
    /// Closed walk as (vertex, role of the `τ` step leaving it).
    pub cycle: Vec<(usize, Role)>,
}

impl TrigonCircumference {
    pub fn vertices(&self) -> Vec<usize> {
        self.cycle.iter().map(|&(v, _)| v).collect()
    }
}

/// Path order of the arcs: rows, then symbols, then columns.
const ARC_ORDER: [Role; 3] = [Role::Row, Role::Sym, Role::Col];

pub fn inner_circumference(t: &Bitrade, tg: &Trigon) -> Result<TrigonCircumference, TrigonError> {
    let arcs = Role::ALL.map(|j| {
        let mut arc = vec![tg.alphas[j.prev().index()]];
        for _ in 0..tg.k[j.index()] {
            arc.push(t.tau(j, *arc.last().expect("non-empty")));
        }
        arc
    });
    // β_j is the vertex just before α_j on the arc of role j−1
    let betas = Role::ALL.map(|j| {
        let arc = &arcs[j.prev().index()];
        arc[arc.len() - 2]
    });
    let mut q: [Vec<usize>; 3] = Default::default();
    let mut h = [0; 3];
    for j in Role::ALL {
        let beta = betas[j.index()];
        let alpha = tg.alphas[j.index()];
        if t.tau_inv(j, beta) != t.tau(j.next(), alpha) {
            return Err(TrigonError::SpliceIdentityFailure(j));
        }
        let cycle = t.tau_cycle(j, beta);
        h[j.index()] = cycle.len();
        q[j.index()] = cycle;
    }
    let mut cycle = Vec::new();
    for j in ARC_ORDER {
        let arc = &arcs[j.index()];
        let kj = tg.k[j.index()];
        for &v in &arc[1..kj - 1] {
            cycle.push((v, j));
        }
        let nj = j.next();
        let qn = &q[nj.index()];
        for &v in &qn[..qn.len() - 1] {
            cycle.push((v, nj));
        }
    }
    for (i, &(v, role)) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()].0;
        if t.tau(role, v) != next {
            return Err(TrigonError::SpliceIdentityFailure(role));
        }
    }
    Ok(TrigonCircumference { arcs, betas, q, h, cycle })
}

/// Inner and outer bitrades of a trigon, with the bookkeeping tying them
/// back to the parent.
#[derive(Clone, Debug)]
pub struct Split {
    pub inner: Bitrade,
    pub outer: Bitrade,
    /// Star positions in the parent.
    pub inner_points: Vec<usize>,
    pub outer_points: Vec<usize>,
    /// Delta positions in the parent of the triangular faces on each side
    /// of the inner circumference.
    pub inner_faces: Vec<usize>,
    pub outer_faces: Vec<usize>,
    pub circumference: TrigonCircumference,
}

impl Split {
    pub fn is_inner_point(&self, b: usize) -> bool {
        self.inner_points.binary_search(&b).is_ok()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

struct Sides {
    inner_points: Vec<usize>,
    outer_points: Vec<usize>,
    inner_faces: Vec<usize>,
    outer_faces: Vec<usize>,
}

/// Flood fill over the semidual faces with the circumference edges cut.
/// The corner faces `γ_j` each contain the vertex point `α_j`, which lies
/// outside the circumference, so they seed the outer side.
fn sides(t: &Bitrade, tg: &Trigon, circ: &TrigonCircumference) -> Result<Sides, TrigonError> {
    let m = t.metrics().m;
    let cyclic = |j: Role, v: usize| column_of(t, t.star()[v].label(j));
    let triangular = |j: Role, v: usize| m + t.delta_agreeing(&t.star()[v], j.prev()).expect("R2 partner");
    let cut: HashSet<(usize, Role)> = circ.cycle.iter().copied().collect();
    let mut uf = UnionFind((0..m + t.size()).collect());
    for v in 0..t.size() {
        for j in Role::ALL {
            if !cut.contains(&(v, j)) {
                uf.union(cyclic(j, v), triangular(j, v));
            }
        }
    }
    // a circumference touching itself at a vertex pinches the inside into
    // several components; all of them are inner
    let roots: BTreeSet<usize> = (0..m + t.size()).map(|f| uf.find(f)).collect();
    let outer_root = uf.find(m + tg.corners[0]);
    if roots.len() < 2 || tg.corners.iter().any(|&g| uf.find(m + g) != outer_root) {
        return Err(TrigonError::CircumferenceDoesNotSeparate(roots.len()));
    }
    let mut inner_points = Vec::new();
    let mut outer_points = Vec::new();
    for v in 0..t.size() {
        let touches_inner =
            Role::ALL.iter().any(|&j| uf.find(cyclic(j, v)) != outer_root || uf.find(triangular(j, v)) != outer_root);
        if touches_inner {
            inner_points.push(v);
        } else {
            outer_points.push(v);
        }
    }
    let (inner_faces, outer_faces): (Vec<usize>, Vec<usize>) =
        (0..t.size()).partition(|&d| uf.find(m + d) != outer_root);
    Ok(Sides { inner_points, outer_points, inner_faces, outer_faces })
}

/// Builds a sub-bitrade over the parent's label names, keeping the
/// parent's label order.
fn sub_bitrade(t: &Bitrade, star: &[Triple], delta: &[Triple], side: &'static str) -> Result<Bitrade, TrigonError> {
    let mut used: [BTreeSet<usize>; 3] = Default::default();
    for x in star {
        for r in Role::ALL {
            used[r.index()].insert(x.get(r));
        }
    }
    let universes = Role::ALL.map(|r| Some(used[r.index()].iter().map(|&i| t.names(r)[i].clone()).collect()));
    let input = BitradeInput {
        universes,
        star: star.iter().map(|x| t.triple_names(x)).collect(),
        delta: delta.iter().map(|x| t.triple_names(x)).collect(),
    };
    let s = build_bitrade(&input).map_err(|error| TrigonError::SplitInvalid { side, error })?;
    if !s.is_spherical() {
        return Err(TrigonError::SplitNotSpherical { side });
    }
    Ok(s)
}

/// Splits a spherical bitrade along the inner circumference of a trigon.
pub fn split(t: &Bitrade, tg: &Trigon) -> Result<Split, TrigonError> {
    if !t.is_spherical() {
        return Err(TrigonError::NotSpherical);
    }
    let circ = inner_circumference(t, tg)?;
    let s = sides(t, tg, &circ)?;
    let star_of = |ps: &[usize]| ps.iter().map(|&p| t.star()[p]).collect::<Vec<_>>();
    let delta_of = |ds: &[usize]| ds.iter().map(|&d| t.delta()[d]).collect::<Vec<_>>();

    let mut inner_star = star_of(&s.inner_points);
    inner_star.push(tg.c);
    let mut inner_delta = delta_of(&s.inner_faces);
    inner_delta.extend(tg.corners.iter().map(|&g| t.delta()[g]));

    let outer_star = star_of(&s.outer_points);
    let mut outer_delta: Vec<Triple> =
        s.outer_faces.iter().filter(|d| !tg.corners.contains(d)).map(|&d| t.delta()[d]).collect();
    outer_delta.push(tg.c);

    let inner = sub_bitrade(t, &inner_star, &inner_delta, "inner")?;
    let outer = sub_bitrade(t, &outer_star, &outer_delta, "outer")?;
    Ok(Split {
        inner,
        outer,
        inner_points: s.inner_points,
        outer_points: s.outer_points,
        inner_faces: s.inner_faces,
        outer_faces: s.outer_faces,
        circumference: circ,
    })
}

fn translate(from: &Bitrade, to: &Bitrade, label: Label) -> Option<usize> {
    to.label_index(label.role, from.name(label))
}

fn translate_triple(from: &Bitrade, to: &Bitrade, x: &Triple) -> Option<Triple> {
    Some(Triple::new(
        translate(from, to, x.label(Role::Row))?,
        translate(from, to, x.label(Role::Col))?,
        translate(from, to, x.label(Role::Sym))?,
    ))
}

/// Lifts a homotopy `φ` of the outer bitrade mod `m` to a homotopy of `T`
/// mod `m·n`, refining inner points by the near-homotopy of `c` in the
/// inner bitrade (`n` is the width of `c` there).
pub fn recombine(t: &Bitrade, tg: &Trigon, sp: &Split, phi: &Homotopy) -> Result<Homotopy, TrigonError> {
    let outer = &sp.outer;
    let inner = &sp.inner;
    phi.check_law(outer)?;
    let c_inner = translate_triple(t, inner, &tg.c).expect("c is a star triple of the inner bitrade");
    let pivot = inner.star_position(&c_inner).expect("c is a star triple of the inner bitrade");
    let psi = induced_homotopy(inner, &solve_pointed(inner, pivot)?)?;
    let near = psi.near().expect("induced homotopies carry their near part");
    let n = psi.modulus();
    let m = phi.modulus();
    let modulus = m.checked_mul(n).ok_or(TrigonError::Overflow)?;
    let (mi, ni, mn) = (i128::from(m), i128::from(n), i128::from(modulus));

    let c_outer = translate_triple(t, outer, &tg.c).expect("c is a delta triple of the outer bitrade");
    let phi_c = Role::ALL.map(|r| i128::from(phi.value(c_outer.label(r))));
    let h = [ni * phi_c[0], ni * phi_c[1], ni * (phi_c[0] + phi_c[1])];
    let k = (phi_c[2] - phi_c[0] - phi_c[1]).rem_euclid(mi);

    let mut values: [Vec<Option<i128>>; 3] = Role::ALL.map(|r| vec![None; t.role_count(r)]);
    for (b, x) in t.star().iter().enumerate() {
        for r in Role::ALL {
            let label = x.label(r);
            let v = if sp.is_inner_point(b) {
                let li = translate(t, inner, label).expect("inner label");
                h[r.index()] + i128::from(near.values[r.index()][li]) * k
            } else {
                let lo = translate(t, outer, label).expect("outer label");
                ni * i128::from(phi.value(Label::new(r, lo)))
            }
            .rem_euclid(mn);
            let slot = &mut values[r.index()][label.index];
            match slot {
                Some(prev) if *prev != v => {
                    return Err(TrigonError::InconsistentRecombination(t.name(label).to_string()))
                }
                _ => *slot = Some(v),
            }
        }
    }
    let values = values.map(|v| v.into_iter().map(|x| x.expect("every label occurs in a star triple")).collect());
    Ok(Homotopy::from_integers(t, modulus, values)?)
}

/// Star triples `b` and coordinates `j` with `b̄_j = ā_j` but `b_j ≠ a_j`.
pub fn shrink_pairs(t: &Bitrade, sol: &Solution) -> Vec<(usize, Role)> {
    let a = sol.pivot_triple;
    let mut out = Vec::new();
    for (b, x) in t.star().iter().enumerate() {
        for j in Role::ALL {
            if x.get(j) != a.get(j) && sol.value(x.label(j)) == sol.value(a.label(j)) {
                out.push((b, j));
            }
        }
    }
    out
}

fn degenerate(sol: &Solution, d: &Triple) -> bool {
    sol.values[0][d.row()].clone() + &sol.values[1][d.col()] == sol.values[2][d.sym()]
}

/// Finds the trigon responsible for `b̄_j = ā_j`: walks the `μ_{j−1,j+1}`
/// cycle from `η_{j−1}` to `η_{j+1}`, forms `β_r` from consecutive
/// non-degenerate triples and returns the unique trigon among them having
/// `b` as an outer point.
pub fn locate_trigon(t: &Bitrade, sol: &Solution, b: usize, j: Role) -> Result<Trigon, TrigonError> {
    let a = sol.pivot_triple;
    let bt = t.star()[b];
    if bt.get(j) == a.get(j) || sol.value(bt.label(j)) != sol.value(a.label(j)) {
        return Err(TrigonError::NotInShrinkSituation(t.format_triple(&bt)));
    }
    let (jm, jp) = (j.prev(), j.next());
    let eta = |r: Role| t.delta_agreeing(&a, r).expect("R2 partner of the pivot");
    let (start, end) = (eta(jm), eta(jp));
    let mut walk = vec![start];
    while *walk.last().expect("non-empty") != end {
        let next = t.mu(jm, jp, *walk.last().expect("non-empty"));
        if next == start {
            return Err(TrigonError::LocateInvariant("μ cycle misses η_{j+1}".into()));
        }
        walk.push(next);
    }
    let idx: Vec<usize> = (0..walk.len()).filter(|&i| !degenerate(sol, &t.delta()[walk[i]])).collect();
    if idx.first() != Some(&0) || idx.last() != Some(&(walk.len() - 1)) {
        return Err(TrigonError::LocateInvariant("a corner triple of the pivot degenerates".into()));
    }
    let mut found = Vec::new();
    for w in idx.windows(2) {
        let (g0, g1) = (t.delta()[walk[w[0]]], t.delta()[walk[w[1]]]);
        let beta = a.with(jm, g0.get(jm)).with(jp, g1.get(jp));
        let in_star = t.star_position(&beta).is_some();
        if in_star != (w[1] == w[0] + 1) {
            return Err(TrigonError::LocateInvariant(format!(
                "{} breaks the star/consecutive dichotomy",
                t.format_triple(&beta)
            )));
        }
        if in_star {
            continue;
        }
        let tg = trigon_at(t, &beta)
            .ok_or_else(|| TrigonError::LocateInvariant(format!("{} is not a trigon", t.format_triple(&beta))))?;
        let circ = inner_circumference(t, &tg)?;
        let s = sides(t, &tg, &circ)?;
        if s.outer_points.binary_search(&b).is_ok() {
            found.push(tg);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one candidate")),
        n => Err(TrigonError::LocateInvariant(format!("{n} trigons have {} as an outer point", t.format_triple(&bt)))),
    }
}

/// One level of the separation recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub size: usize,
    pub width: u64,
    pub trigon: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Separation {
    pub homotopy: Homotopy,
    pub depth: usize,
    pub trace: Vec<TraceStep>,
}

/// A homotopy into `Z_n` with `φ_i(a_i) ≠ φ_i(b_i)`, built by recursing
/// into outer bitrades of located trigons. The recursion pivots at a vertex
/// point of the trigon sharing the label `a_i`.
pub fn separate(t: &Bitrade, a: usize, b: usize, i: Role) -> Result<Separation, TrigonError> {
    let (at, bt) = (t.star()[a], t.star()[b]);
    if at.get(i) == bt.get(i) {
        return Err(TrigonError::ArgumentError(format!(
            "{} and {} share their {i} label",
            t.format_triple(&at),
            t.format_triple(&bt)
        )));
    }
    if !t.is_spherical() {
        return Err(TrigonError::NotSpherical);
    }
    let sol = solve_pointed(t, a)?;
    let psi = induced_homotopy(t, &sol)?;
    let mut step = TraceStep { size: t.size(), width: psi.modulus(), trigon: None };
    if psi.separates(i, at.get(i), bt.get(i)) {
        return Ok(Separation { homotopy: psi, depth: 0, trace: vec![step] });
    }
    let tg = locate_trigon(t, &sol, b, i)?;
    step.trigon = Some(t.format_triple(&tg.c));
    let sp = split(t, &tg)?;
    let outer = &sp.outer;
    let to_outer = |p: usize| -> Result<usize, TrigonError> {
        let x = &t.star()[p];
        sp.outer_points
            .binary_search(&p)
            .ok()
            .and_then(|_| translate_triple(t, outer, x))
            .and_then(|y| outer.star_position(&y))
            .ok_or_else(|| TrigonError::NotOuter(t.format_triple(x)))
    };
    // a need not survive in S0, but its i-label does: α_{i+1} carries c_i = a_i
    let inner_sep = separate(outer, to_outer(tg.alphas[i.next().index()])?, to_outer(b)?, i)?;
    let phi = recombine(t, &tg, &sp, &inner_sep.homotopy)?;
    assert!(phi.separates(i, at.get(i), bt.get(i)), "lifted homotopy lost the separation");
    let mut trace = vec![step];
    trace.extend(inner_sep.trace);
    Ok(Separation { homotopy: phi, depth: inner_sep.depth + 1, trace })
}

#[derive(Clone, Debug)]
pub struct Factor {
    /// The label pair whose separation introduced this factor.
    pub pair: (Label, Label),
    pub homotopy: Homotopy,
    pub depth: usize,
}

/// A role-injective homotopy into `∏ Z_{n_k}`.
#[derive(Clone, Debug)]
pub struct ProductEmbedding {
    pub factors: Vec<Factor>,
}

impl ProductEmbedding {
    pub fn moduli(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.homotopy.modulus()).collect()
    }

    /// Image of a label as a coordinate vector.
    pub fn image(&self, label: Label) -> Vec<u64> {
        self.factors.iter().map(|f| f.homotopy.value(label)).collect()
    }

    pub fn is_injective(&self, t: &Bitrade) -> bool {
        injective(t, &self.factors.iter().map(|f| &f.homotopy).collect::<Vec<_>>())
    }
}

fn injective(t: &Bitrade, hs: &[&Homotopy]) -> bool {
    Role::ALL.iter().all(|&r| {
        let images: HashSet<Vec<u64>> =
            (0..t.role_count(r)).map(|x| hs.iter().map(|h| h.value(Label::new(r, x))).collect()).collect();
        images.len() == t.role_count(r)
    })
}

/// Separates every same-role label pair, reusing factors that already
/// separate a pair and dropping factors that turn out redundant.
pub fn embed_product(t: &Bitrade) -> Result<ProductEmbedding, TrigonError> {
    if !t.is_spherical() {
        return Err(TrigonError::NotSpherical);
    }
    let mut factors: Vec<Factor> = Vec::new();
    for r in Role::ALL {
        let first: Vec<usize> = (0..t.role_count(r))
            .map(|x| t.star().iter().position(|s| s.get(r) == x).expect("label occurs in a star triple"))
            .collect();
        for x in 0..t.role_count(r) {
            for y in x + 1..t.role_count(r) {
                if factors.iter().any(|f| f.homotopy.separates(r, x, y)) {
                    continue;
                }
                let s = separate(t, first[x], first[y], r)?;
                factors.push(Factor {
                    pair: (Label::new(r, x), Label::new(r, y)),
                    homotopy: s.homotopy,
                    depth: s.depth,
                });
            }
        }
    }
    let mut i = 0;
    while i < factors.len() {
        let rest: Vec<&Homotopy> =
            factors.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, f)| &f.homotopy).collect();
        if !rest.is_empty() && injective(t, &rest) {
            factors.remove(i);
        } else {
            i += 1;
        }
    }
    let emb = ProductEmbedding { factors };
    assert!(emb.is_injective(t), "product embedding is not injective");
    Ok(emb)
}

/// Inverse of [`split`]: replaces the triangular face `face` of `outer` by
/// the bitrade `inner` with its star triple `point` removed. The labels of
/// `point` are identified with those of `face`; the other inner labels are
/// renamed apart.
pub fn graft(outer: &Bitrade, face: usize, inner: &Bitrade, point: usize) -> Result<Bitrade, BitradeError> {
    let c = outer.delta()[face];
    let p = inner.star()[point];
    let rename = |r: Role, idx: usize| -> String {
        if idx == p.get(r) {
            return outer.names(r)[c.get(r)].clone();
        }
        let mut name = format!("{}'", inner.names(r)[idx]);
        while outer.label_index(r, &name).is_some() {
            name.push('\'');
        }
        name
    };
    let names_of = |x: &Triple| Role::ALL.map(|r| rename(r, x.get(r)));
    let mut star: Vec<[String; 3]> = outer.star().iter().map(|x| outer.triple_names(x)).collect();
    star.extend(inner.star().iter().enumerate().filter(|&(i, _)| i != point).map(|(_, x)| names_of(x)));
    let mut delta: Vec<[String; 3]> =
        outer.delta().iter().enumerate().filter(|&(i, _)| i != face).map(|(_, x)| outer.triple_names(x)).collect();
    delta.extend(inner.delta().iter().map(names_of));
    build_bitrade(&BitradeInput { universes: Default::default(), star, delta })
}

/// Exhaustive scan of the full label cube; test oracle for
/// [`find_trigons`].
pub fn brute_force_trigons(t: &Bitrade) -> Vec<Triple> {
    let mut out = Vec::new();
    for r in 0..t.role_count(Role::Row) {
        for c in 0..t.role_count(Role::Col) {
            for s in 0..t.role_count(Role::Sym) {
                let x = Triple::new(r, c, s);
                if t.star_position(&x).is_some() {
                    continue;
                }
                let corner = |j: Role| {
                    t.delta()
                        .iter()
                        .any(|d| d.get(j) != x.get(j) && Role::ALL.iter().all(|&q| q == j || d.get(q) == x.get(q)))
                };
                if Role::ALL.iter().all(|&j| corner(j)) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Sum of the near values must equal the modulus at the pivot; exposed for
/// diagnostics of recombination inputs.
pub fn width_of(t: &Bitrade, pivot: usize) -> Result<u64, TrigonError> {
    let sol = solve_pointed(t, pivot)?;
    debug_assert!(sol.values[2][sol.pivot_triple.sym()].is_one());
    debug_assert!(sol.values[0][sol.pivot_triple.row()].is_zero());
    Ok(sol.width())
}
