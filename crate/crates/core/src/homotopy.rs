//! Homotopies into `Z_n`: label maps satisfying `φ₁(b₁) + φ₂(b₂) ≡ φ₃(b₃)`
//! on every star triple.
//!
//! The only way to obtain a [`Homotopy`] is through a constructor that
//! checks the additive law, so every value in circulation has passed it.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::bitrade::{Bitrade, Label, Role, Triple};
use crate::system::Solution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{role} map has {found} entries, expected {expected}")]
    Shape { role: Role, expected: usize, found: usize },
    #[error("{role} value {value} at index {index} is not reduced mod {modulus}")]
    Unreduced { role: Role, index: usize, value: u64, modulus: u64 },
    #[error("additive law fails at star triple {triple}")]
    LawViolation { triple: String },
    #[error("near-homotopy fails at star triple {triple}")]
    NearViolation { triple: String },
    #[error("induced homotopy merges {a} and {b} whose values differ")]
    SeparationProperty { a: String, b: String },
    #[error("modulus overflow")]
    Overflow,
}

/// Un-reduced integer values `n·b̄` relative to a pivot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearHomotopy {
    pub pivot: usize,
    pub values: [Vec<i64>; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    modulus: u64,
    maps: [Vec<u64>; 3],
    near: Option<NearHomotopy>,
}

impl Homotopy {
    pub fn new(t: &Bitrade, modulus: u64, maps: [Vec<u64>; 3]) -> Result<Self, HomotopyError> {
        Self::with_near(t, modulus, maps, None)
    }

    pub fn with_near(
        t: &Bitrade,
        modulus: u64,
        maps: [Vec<u64>; 3],
        near: Option<NearHomotopy>,
    ) -> Result<Self, HomotopyError> {
        if modulus == 0 {
            return Err(HomotopyError::ZeroModulus);
        }
        for role in Role::ALL {
            let map = &maps[role.index()];
            if map.len() != t.role_count(role) {
                return Err(HomotopyError::Shape { role, expected: t.role_count(role), found: map.len() });
            }
            if let Some((index, &value)) = map.iter().enumerate().find(|(_, &v)| v >= modulus) {
                return Err(HomotopyError::Unreduced { role, index, value, modulus });
            }
        }
        let h = Homotopy { modulus, maps, near };
        h.check_law(t)?;
        if let Some(near) = &h.near {
            check_near(t, modulus, near)?;
        }
        Ok(h)
    }

    /// Reduces arbitrary integers mod `modulus` before validating.
    pub fn from_integers(t: &Bitrade, modulus: u64, values: [Vec<i128>; 3]) -> Result<Self, HomotopyError> {
        if modulus == 0 {
            return Err(HomotopyError::ZeroModulus);
        }
        let n = i128::from(modulus);
        let maps = values.map(|v| v.into_iter().map(|x| x.rem_euclid(n) as u64).collect());
        Self::new(t, modulus, maps)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn maps(&self) -> &[Vec<u64>; 3] {
        &self.maps
    }

    pub fn value(&self, label: Label) -> u64 {
        self.maps[label.role.index()][label.index]
    }

    pub fn near(&self) -> Option<&NearHomotopy> {
        self.near.as_ref()
    }

    /// Re-checks the additive law on every star triple of `t`.
    pub fn check_law(&self, t: &Bitrade) -> Result<(), HomotopyError> {
        let n = u128::from(self.modulus);
        for b in t.star() {
            let lhs = (u128::from(self.maps[0][b.row()]) + u128::from(self.maps[1][b.col()])) % n;
            if lhs != u128::from(self.maps[2][b.sym()]) {
                return Err(HomotopyError::LawViolation { triple: t.format_triple(b) });
            }
        }
        Ok(())
    }

    pub fn separates(&self, role: Role, x: usize, y: usize) -> bool {
        self.maps[role.index()][x] != self.maps[role.index()][y]
    }

    /// First pair of labels of `role` sharing a value.
    pub fn collision(&self, role: Role) -> Option<(usize, usize)> {
        let map = &self.maps[role.index()];
        (0..map.len()).flat_map(|i| (i + 1..map.len()).map(move |j| (i, j))).find(|&(i, j)| map[i] == map[j])
    }

    pub fn is_injective(&self) -> bool {
        Role::ALL.iter().all(|&r| self.collision(r).is_none())
    }

    /// `φ[a]`: the shift making every coordinate of `a` map to zero.
    pub fn normalize(&self, t: &Bitrade, a: &Triple) -> Homotopy {
        let n = self.modulus;
        let maps = Role::ALL.map(|r| {
            let base = self.maps[r.index()][a.get(r)];
            self.maps[r.index()].iter().map(|&v| (v + n - base) % n).collect()
        });
        let near = self.near.clone().filter(|nh| t.star()[nh.pivot] == *a && maps == self.maps);
        Homotopy::with_near(t, n, maps, near).expect("shifting by a star triple preserves the law")
    }

    pub fn to_json(&self, t: &Bitrade) -> HomotopyJson {
        let per_role = |r: Role| -> Vec<(String, u64)> {
            t.names(r).iter().cloned().zip(self.maps[r.index()].iter().copied()).collect()
        };
        HomotopyJson {
            modulus: self.modulus,
            rows: per_role(Role::Row),
            cols: per_role(Role::Col),
            syms: per_role(Role::Sym),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyJson {
    pub modulus: u64,
    pub rows: Vec<(String, u64)>,
    pub cols: Vec<(String, u64)>,
    pub syms: Vec<(String, u64)>,
}

fn check_near(t: &Bitrade, n: u64, near: &NearHomotopy) -> Result<(), HomotopyError> {
    let a = t.star()[near.pivot];
    let v = &near.values;
    for (r, vals) in v.iter().enumerate() {
        let map_len = t.role_count(Role::from_index(r));
        if vals.len() != map_len {
            return Err(HomotopyError::Shape { role: Role::from_index(r), expected: map_len, found: vals.len() });
        }
    }
    let n = n as i64;
    let bad_pivot = v[0][a.row()] != 0 || v[1][a.col()] != 0 || v[2][a.sym()] != n;
    if bad_pivot {
        return Err(HomotopyError::NearViolation { triple: t.format_triple(&a) });
    }
    for (i, b) in t.star().iter().enumerate() {
        if i != near.pivot && v[0][b.row()] + v[1][b.col()] != v[2][b.sym()] {
            return Err(HomotopyError::NearViolation { triple: t.format_triple(b) });
        }
    }
    Ok(())
}

/// The homotopy induced by a pivot: `ψ_j(x) = n·x̄ mod n` with `n` the
/// width, together with the near-homotopy `ψ̄_j(x) = n·x̄`.
pub fn induced_homotopy(t: &Bitrade, sol: &Solution) -> Result<Homotopy, HomotopyError> {
    let n = sol.width();
    let big_n = BigInt::from(n);
    let near: [Vec<i64>; 3] = Role::ALL.map(|r| {
        sol.role_values(r)
            .iter()
            .map(|v| {
                let scaled = v * &big_n;
                debug_assert!(scaled.is_integer());
                scaled.to_integer().to_i64().expect("scaled value fits in i64")
            })
            .collect()
    });
    let ni = n as i64;
    let maps = near.clone().map(|v| v.into_iter().map(|x| x.rem_euclid(ni) as u64).collect());
    let h = Homotopy::with_near(t, n, maps, Some(NearHomotopy { pivot: sol.pivot, values: near }))?;
    // ψ_j(b) = ψ_j(d) exactly when b̄ = d̄
    for role in Role::ALL {
        let vals = sol.role_values(role);
        for x in 0..vals.len() {
            for y in x + 1..vals.len() {
                if h.separates(role, x, y) != (vals[x] != vals[y]) {
                    return Err(HomotopyError::SeparationProperty {
                        a: t.names(role)[x].clone(),
                        b: t.names(role)[y].clone(),
                    });
                }
            }
        }
    }
    Ok(h)
}
