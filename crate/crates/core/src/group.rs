//! The universal abelian group `G(T) = Z^m / N(T)`, its difference subgroup
//! `H(T)`, canonical label images and the determinant and rank checks on
//! the relation matrix.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{determinant, int_rank, left_kernel, smith_normal_form, IntMatrix};
use crate::bitrade::{Bitrade, Label, Role};
use crate::system::{build_system, column_of};

/// `Z^free_rank ⊕ Z_{d_1} ⊕ … ⊕ Z_{d_k}` with `d_1 | d_2 | … | d_k`, all
/// `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub invariant_factors: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl AbelianGroupStructure {
    /// Reads the structure off a Smith diagonal of an `r × n` relation
    /// matrix presenting `Z^n`.
    fn from_diagonal(diagonal: &[BigInt], generators: usize) -> Self {
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        AbelianGroupStructure {
            free_rank: generators - nonzero,
            invariant_factors: diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn torsion(&self) -> AbelianGroupStructure {
        AbelianGroupStructure { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `G(T)` presented by the relation matrix.
pub fn presentation(t: &Bitrade) -> AbelianGroupStructure {
    let b = build_system(t);
    let snf = smith_normal_form(&b);
    AbelianGroupStructure::from_diagonal(&snf.diagonal, b.cols())
}

/// Coordinates of every label's class in `G(T)`. Coordinate `k` lives in
/// `Z_{moduli[k]}`, or in `Z` when the modulus is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalImages {
    pub moduli: Vec<BigInt>,
    pub images: [Vec<Vec<BigInt>>; 3],
    /// The column transform `V` of `U·B·V = D`; label `x` maps to row
    /// `column_of(x)` of `V`.
    pub v: IntMatrix,
}

impl CanonicalImages {
    pub fn image(&self, label: Label) -> &[BigInt] {
        &self.images[label.role.index()][label.index]
    }

    fn reduce(&self, mut x: Vec<BigInt>) -> Vec<BigInt> {
        for (v, d) in x.iter_mut().zip(&self.moduli) {
            if !d.is_zero() {
                *v = v.mod_floor(d);
            }
        }
        x
    }

    /// First pair of labels of `role` with equal images.
    pub fn collision(&self, role: Role) -> Option<(usize, usize)> {
        let mut seen: HashMap<&[BigInt], usize> = HashMap::new();
        for (i, img) in self.images[role.index()].iter().enumerate() {
            if let Some(&j) = seen.get(img.as_slice()) {
                return Some((j, i));
            }
            seen.insert(img.as_slice(), i);
        }
        None
    }
}

pub fn canonical_images(t: &Bitrade) -> CanonicalImages {
    let b = build_system(t);
    let snf = smith_normal_form(&b);
    let m = b.cols();
    let d_at = |k: usize| snf.diagonal.get(k).cloned().unwrap_or_else(BigInt::zero);
    let kept: Vec<usize> = (0..m).filter(|&k| !d_at(k).is_one()).collect();
    let moduli: Vec<BigInt> = kept.iter().map(|&k| d_at(k)).collect();
    let mut ci = CanonicalImages { moduli, images: Default::default(), v: snf.v.clone() };
    ci.images = Role::ALL.map(|r| {
        (0..t.role_count(r))
            .map(|x| {
                let row = column_of(t, Label::new(r, x));
                ci.reduce(kept.iter().map(|&k| snf.v[(row, k)].clone()).collect())
            })
            .collect()
    });
    for x in t.star() {
        let sum: Vec<BigInt> =
            ci.image(x.label(Role::Row)).iter().zip(ci.image(x.label(Role::Col))).map(|(a, b)| a + b).collect();
        assert_eq!(ci.reduce(sum), ci.image(x.label(Role::Sym)), "canonical images break the additive law");
    }
    ci
}

/// `H(T)`: the subgroup of `G(T)` generated by `g_i(b_i) − g_i(a_i)` for
/// rows and columns, with `a` the first star triple. Computed as `Z^g / K`
/// where `K` collects the coefficient vectors landing in `N(T)`.
pub fn subgroup_h(t: &Bitrade) -> AbelianGroupStructure {
    let b = build_system(t);
    let a = t.star()[0];
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for r in [Role::Row, Role::Col] {
        for x in (0..t.role_count(r)).filter(|&x| x != a.get(r)) {
            let mut w = vec![BigInt::zero(); b.cols()];
            w[column_of(t, Label::new(r, x))] = BigInt::one();
            w[column_of(t, a.label(r))] = -BigInt::one();
            gens.push(w);
        }
    }
    let g = gens.len();
    if g == 0 {
        return AbelianGroupStructure { free_rank: 0, invariant_factors: Vec::new() };
    }
    let mut rows = gens;
    rows.extend((0..b.rows()).map(|i| b.row(i).to_vec()));
    let stacked = IntMatrix::from_rows(rows).expect("rectangular");
    let kernel = left_kernel(&stacked);
    let relations: Vec<Vec<BigInt>> = (0..kernel.rows()).map(|i| kernel.row(i)[..g].to_vec()).collect();
    if relations.is_empty() {
        return AbelianGroupStructure { free_rank: g, invariant_factors: Vec::new() };
    }
    let k = IntMatrix::from_rows(relations).expect("rectangular");
    let snf = smith_normal_form(&k);
    AbelianGroupStructure::from_diagonal(&snf.diagonal, g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embeddability {
    pub embeddable: bool,
    /// Two labels of one role identified by every homotopy into an abelian
    /// group.
    pub witness: Option<[String; 2]>,
    pub role: Option<Role>,
}

pub fn is_abelian_embeddable(t: &Bitrade) -> Embeddability {
    let ci = canonical_images(t);
    for r in Role::ALL {
        if let Some((x, y)) = ci.collision(r) {
            return Embeddability {
                embeddable: false,
                witness: Some([t.names(r)[x].clone(), t.names(r)[y].clone()]),
                role: Some(r),
            };
        }
    }
    Embeddability { embeddable: true, witness: None, role: None }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetInvariance {
    /// Admissible deleted-column pairs (0-based).
    pub pairs: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub distinct_values: Vec<BigInt>,
    pub all_equal: bool,
    pub nonzero: bool,
}

impl DetInvariance {
    pub fn common_value(&self) -> Option<&BigInt> {
        if self.all_equal {
            self.distinct_values.first()
        } else {
            None
        }
    }
}

/// Admissible pairs `(i, j)`, `i < j`, of columns to delete from `B`: `i` a
/// row and `j` a column or symbol, or `i` a column and `j` a symbol.
pub fn admissible_pairs(t: &Bitrade) -> Vec<(usize, usize)> {
    let o1 = t.role_count(Role::Row);
    let o12 = o1 + t.role_count(Role::Col);
    let m = t.metrics().m;
    let mut out: Vec<(usize, usize)> = (0..o1).flat_map(|i| (o1..m).map(move |j| (i, j))).collect();
    out.extend((o1..o12).flat_map(|i| (o12..m).map(move |j| (i, j))));
    out
}

/// `|det B_ij|` over every admissible pair. `None` unless `B` becomes square
/// after deleting two columns.
pub fn check_det_invariance(t: &Bitrade) -> Option<DetInvariance> {
    let b = build_system(t);
    if b.cols() != b.rows() + 2 {
        return None;
    }
    let pairs = admissible_pairs(t);
    let values: BTreeSet<BigInt> = pairs
        .iter()
        .map(|&(i, j)| determinant(&b.without_columns(&[i, j])).expect("square after deletion").abs())
        .collect();
    let distinct_values: Vec<BigInt> = values.into_iter().collect();
    Some(DetInvariance {
        pairs: pairs.len(),
        all_equal: distinct_values.len() == 1,
        nonzero: distinct_values.iter().all(|d| !d.is_zero()),
        distinct_values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerHomotopyRank {
    pub rank: usize,
    pub nullity: usize,
    /// Only the rank-2 lattice of trivial homotopies maps into `Z`.
    pub trivial_only: bool,
}

pub fn integer_homotopy_rank(t: &Bitrade) -> IntegerHomotopyRank {
    let b = build_system(t);
    let rank = int_rank(&b);
    let nullity = b.cols() - rank;
    IntegerHomotopyRank { rank, nullity, trivial_only: nullity == 2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn intercalate_groups() {
        let t = corpus::intercalate();
        let g = presentation(&t);
        assert_eq!((g.free_rank, g.invariant_factors.clone()), (2, ints(&[2])));
        assert_eq!(g.to_string(), "Z^2 + Z2");
        assert_eq!(subgroup_h(&t), g.torsion());
        assert!(is_abelian_embeddable(&t).embeddable);
        let ci = canonical_images(&t);
        let (r0, r1) = (ci.image(Label::new(Role::Row, 0)), ci.image(Label::new(Role::Row, 1)));
        assert_ne!(r0, r1);
        let torsion_coord = ci.moduli.iter().position(|d| *d == BigInt::from(2)).unwrap();
        for (k, (x, y)) in r0.iter().zip(r1).enumerate() {
            if k != torsion_coord {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn intercalate_determinants() {
        let t = corpus::intercalate();
        let d = check_det_invariance(&t).unwrap();
        assert_eq!(d.common_value(), Some(&BigInt::from(2)));
        assert_eq!(integer_homotopy_rank(&t), IntegerHomotopyRank { rank: 4, nullity: 2, trivial_only: true });
    }

    #[test]
    fn example_4x5_groups() {
        let t = corpus::example_4x5();
        let g = presentation(&t);
        assert_eq!(g.free_rank, 2);
        assert_eq!(g.invariant_factors, ints(&[14]));
        assert_eq!(subgroup_h(&t), g.torsion());
        let d = check_det_invariance(&t).unwrap();
        assert_eq!(d.pairs, 65);
        assert!(d.all_equal && d.nonzero);
        assert_eq!(integer_homotopy_rank(&t).rank, 12);
    }

    #[test]
    fn toroidal_groups() {
        let delta = corpus::toroidal_delta();
        let h = subgroup_h(&delta);
        assert_eq!(h.invariant_factors, ints(&[10]));
        assert!(h.is_finite());
        let star = corpus::toroidal_star();
        let e = is_abelian_embeddable(&star);
        assert!(!e.embeddable);
        assert!(e.witness.is_some());
        assert!(check_det_invariance(&star).is_none());
    }

    #[test]
    fn display_of_trivial_group() {
        let g = AbelianGroupStructure { free_rank: 0, invariant_factors: vec![] };
        assert_eq!(g.to_string(), "0");
    }
}
