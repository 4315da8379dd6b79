//! The equation system `b₁ + b₂ = b₃` over the star triples, its pointed
//! form and exact solutions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{format_rational, gauss_solve, lcm_all, IntMatrix, RatMatrix, Rational, SolveOutcome};
use crate::bitrade::{Bitrade, Label, Role, Triple};

/// Column of a label in the relation matrix: rows, then columns, then
/// symbols.
pub fn column_of(t: &Bitrade, label: Label) -> usize {
    match label.role {
        Role::Row => label.index,
        Role::Col => t.role_count(Role::Row) + label.index,
        Role::Sym => t.role_count(Role::Row) + t.role_count(Role::Col) + label.index,
    }
}

/// Inverse of [`column_of`].
pub fn label_of_column(t: &Bitrade, col: usize) -> Label {
    let (o1, o2) = (t.role_count(Role::Row), t.role_count(Role::Col));
    if col < o1 {
        Label::new(Role::Row, col)
    } else if col < o1 + o2 {
        Label::new(Role::Col, col - o1)
    } else {
        Label::new(Role::Sym, col - o1 - o2)
    }
}

/// The `s × m` relation matrix: one row per star triple in canonical order,
/// `+1` at its row and column, `−1` at its symbol.
pub fn build_system(t: &Bitrade) -> IntMatrix {
    let m = t.metrics().m;
    let mut b = IntMatrix::zeros(t.size(), m);
    for (i, x) in t.star().iter().enumerate() {
        b[(i, column_of(t, x.label(Role::Row)))] = BigInt::one();
        b[(i, column_of(t, x.label(Role::Col)))] = BigInt::one();
        b[(i, column_of(t, x.label(Role::Sym)))] = -BigInt::one();
    }
    b
}

/// A bitrade with a distinguished star triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedBitrade {
    pub bitrade: Bitrade,
    /// Star position of the pivot.
    pub pivot: usize,
}

impl PointedBitrade {
    pub fn new(bitrade: Bitrade, pivot: Triple) -> Result<Self, SystemError> {
        let pivot =
            bitrade.star_position(&pivot).ok_or_else(|| SystemError::PivotNotInStar(bitrade.format_triple(&pivot)))?;
        Ok(PointedBitrade { bitrade, pivot })
    }

    /// Pivot at the first star triple in canonical order.
    pub fn with_default_pivot(bitrade: Bitrade) -> Self {
        PointedBitrade { bitrade, pivot: 0 }
    }

    pub fn pivot_triple(&self) -> Triple {
        self.bitrade.star()[self.pivot]
    }

    pub fn solve(&self) -> Result<Solution, SystemError> {
        solve_pointed(&self.bitrade, self.pivot)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("pivot {0} is not a star triple")]
    PivotNotInStar(String),
    #[error(
        "singular system: {equations} equations in {unknowns} unknowns, rank {rank}, nullity {nullity}{}",
        if *.consistent { "" } else { ", inconsistent" }
    )]
    SingularSystem { equations: usize, unknowns: usize, rank: usize, nullity: usize, consistent: bool },
    #[error("value of {label} is {value}, outside the unit range")]
    RangeViolation { label: String, value: String },
}

/// Exact values `b̄` of every label relative to a pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub values: [Vec<Rational>; 3],
    pub pivot: usize,
    pub pivot_triple: Triple,
}

impl Solution {
    pub fn value(&self, label: Label) -> &Rational {
        &self.values[label.role.index()][label.index]
    }

    pub fn role_values(&self, role: Role) -> &[Rational] {
        &self.values[role.index()]
    }

    /// The point `(x, y) = (b̄₂, b̄₁)` of a triple.
    pub fn point(&self, b: &Triple) -> (Rational, Rational) {
        (self.values[1][b.col()].clone(), self.values[0][b.row()].clone())
    }

    pub fn first_collision(&self) -> Option<(Label, Label)> {
        first_collision(self)
    }

    pub fn is_separated(&self) -> bool {
        first_collision(self).is_none()
    }

    pub fn width(&self) -> u64 {
        width(self)
    }

    pub fn to_json(&self, t: &Bitrade) -> SolutionJson {
        let per_role = |r: Role| -> Vec<(String, String)> {
            t.names(r).iter().cloned().zip(self.values[r.index()].iter().map(format_rational)).collect()
        };
        SolutionJson {
            pivot: t.triple_names(&self.pivot_triple),
            rows: per_role(Role::Row),
            cols: per_role(Role::Col),
            syms: per_role(Role::Sym),
            width: self.width(),
            separated: self.is_separated(),
            collision: self.first_collision().map(|(a, b)| [t.name(a).to_string(), t.name(b).to_string()]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionJson {
    pub pivot: [String; 3],
    pub rows: Vec<(String, String)>,
    pub cols: Vec<(String, String)>,
    pub syms: Vec<(String, String)>,
    pub width: u64,
    pub separated: bool,
    pub collision: Option<[String; 2]>,
}

/// Solves `Eq(T,a)`: fixes `a₁ = a₂ = 0`, `a₃ = 1`, drops the pivot
/// equation and solves the rest exactly.
pub fn solve_pointed(t: &Bitrade, pivot: usize) -> Result<Solution, SystemError> {
    let a = t.star()[pivot];
    let m = t.metrics().m;
    let fixed: HashMap<usize, Rational> = [
        (column_of(t, a.label(Role::Row)), Rational::zero()),
        (column_of(t, a.label(Role::Col)), Rational::zero()),
        (column_of(t, a.label(Role::Sym)), Rational::one()),
    ]
    .into_iter()
    .collect();
    let unknowns: Vec<usize> = (0..m).filter(|c| !fixed.contains_key(c)).collect();
    let slot: HashMap<usize, usize> = unknowns.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let equations: Vec<&Triple> = t.star().iter().enumerate().filter(|&(i, _)| i != pivot).map(|(_, x)| x).collect();
    let mut lhs = RatMatrix::zeros(equations.len(), unknowns.len());
    let mut rhs = vec![Rational::zero(); equations.len()];
    for (e, x) in equations.iter().enumerate() {
        for (role, coef) in [(Role::Row, 1), (Role::Col, 1), (Role::Sym, -1)] {
            let col = column_of(t, x.label(role));
            let coef = Rational::from_integer(BigInt::from(coef));
            match fixed.get(&col) {
                Some(v) => rhs[e] -= &coef * v,
                None => lhs[(e, slot[&col])] += coef,
            }
        }
    }
    let x = match gauss_solve(&lhs, &rhs).expect("system shape is consistent") {
        SolveOutcome::Unique(x) => x,
        outcome @ (SolveOutcome::NoSolution { rank } | SolveOutcome::NonUnique { rank }) => {
            let consistent = matches!(outcome, SolveOutcome::NonUnique { .. });
            return Err(SystemError::SingularSystem {
                equations: equations.len(),
                unknowns: unknowns.len(),
                rank,
                nullity: unknowns.len() - rank,
                consistent,
            });
        }
    };

    let mut values: [Vec<Rational>; 3] = Role::ALL.map(|r| vec![Rational::zero(); t.role_count(r)]);
    for c in 0..m {
        let label = label_of_column(t, c);
        values[label.role.index()][label.index] = match fixed.get(&c) {
            Some(v) => v.clone(),
            None => x[slot[&c]].clone(),
        };
    }
    let sol = Solution { values, pivot, pivot_triple: a };
    if t.is_spherical() {
        check_range(t, &sol)?;
    }
    Ok(sol)
}

fn check_range(t: &Bitrade, sol: &Solution) -> Result<(), SystemError> {
    for role in Role::ALL {
        for (i, v) in sol.role_values(role).iter().enumerate() {
            let ok = match role {
                Role::Row | Role::Col => !v.is_negative(),
                Role::Sym => v <= &Rational::one(),
            };
            if !ok {
                return Err(SystemError::RangeViolation { label: t.names(role)[i].clone(), value: format_rational(v) });
            }
        }
    }
    Ok(())
}

/// The first pair of same-role labels with equal values, scanning roles in
/// order and pairs lexicographically.
pub fn first_collision(sol: &Solution) -> Option<(Label, Label)> {
    for role in Role::ALL {
        let vals = sol.role_values(role);
        let mut seen: HashMap<&Rational, usize> = HashMap::new();
        let mut best: Option<(usize, usize)> = None;
        for (i, v) in vals.iter().enumerate() {
            if let Some(&j) = seen.get(v) {
                if best.is_none_or(|b| (j, i) < b) {
                    best = Some((j, i));
                }
            } else {
                seen.insert(v, i);
            }
        }
        if let Some((j, i)) = best {
            return Some((Label::new(role, j), Label::new(role, i)));
        }
    }
    None
}

/// Least common multiple of all value denominators.
pub fn width(sol: &Solution) -> u64 {
    let l = lcm_all(sol.values.iter().flatten().map(|v| v.denom()));
    u64::try_from(&l).expect("width fits in u64")
}
