//! Built-in bitrades used by the tests, the acceptance suite and the CLI
//! demos.

use crate::bitrade::{build_bitrade, Bitrade, BitradeInput};
use crate::io::parse_doc;

pub const INTERCALATE_JSON: &str = include_str!("../data/intercalate.json");
pub const BITRADE_4X5_JSON: &str = include_str!("../data/bitrade_4x5.json");
pub const NESTED_INTERCALATE_JSON: &str = include_str!("../data/nested_intercalate.json");
/// Toroidal size-18 bitrade whose star side admits only trivial homotopies.
pub const TOROIDAL_STAR_JSON: &str = include_str!("../data/toroidal_star.json");
/// The same bitrade with the roles of star and delta exchanged.
pub const TOROIDAL_DELTA_JSON: &str = include_str!("../data/toroidal_delta.json");

fn input(json: &str) -> BitradeInput {
    parse_doc(json).expect("bundled corpus parses").into_input()
}

fn load(json: &str) -> Bitrade {
    build_bitrade(&input(json)).expect("bundled corpus is valid")
}

pub fn intercalate_input() -> BitradeInput {
    input(INTERCALATE_JSON)
}

/// The 2×2 bitrade of size 4.
pub fn intercalate() -> Bitrade {
    load(INTERCALATE_JSON)
}

pub fn example_4x5_input() -> BitradeInput {
    input(BITRADE_4X5_JSON)
}

/// Spherical bitrade of size 12 on 4 rows, 5 columns and 5 symbols.
pub fn example_4x5() -> Bitrade {
    load(BITRADE_4X5_JSON)
}

/// Size-7 bitrade from subdividing the middle triangle of the intercalate
/// dissection by the intercalate pattern.
pub fn nested_intercalate() -> Bitrade {
    load(NESTED_INTERCALATE_JSON)
}

pub fn toroidal_star() -> Bitrade {
    load(TOROIDAL_STAR_JSON)
}

pub fn toroidal_delta() -> Bitrade {
    load(TOROIDAL_DELTA_JSON)
}

fn intercalate_on(rows: [&str; 2], cols: [&str; 2], syms: [&str; 2]) -> (Vec<[String; 3]>, Vec<[String; 3]>) {
    let t = |r: usize, c: usize, s: usize| [rows[r].to_string(), cols[c].to_string(), syms[s].to_string()];
    (vec![t(0, 0, 0), t(0, 1, 1), t(1, 0, 1), t(1, 1, 0)], vec![t(0, 0, 1), t(0, 1, 0), t(1, 0, 0), t(1, 1, 1)])
}

/// Disjoint union of two intercalates on disjoint labels.
pub fn two_intercalates() -> Bitrade {
    let (mut star, mut delta) = intercalate_on(["r0", "r1"], ["c0", "c1"], ["s0", "s1"]);
    let (s2, d2) = intercalate_on(["r2", "r3"], ["c2", "c3"], ["s2", "s3"]);
    star.extend(s2);
    delta.extend(d2);
    build_bitrade(&BitradeInput { universes: Default::default(), star, delta }).expect("valid union")
}

/// Two intercalates sharing only the row label `r`.
pub fn shared_row_intercalates() -> Bitrade {
    let (mut star, mut delta) = intercalate_on(["r", "ra"], ["c0", "c1"], ["s0", "s1"]);
    let (s2, d2) = intercalate_on(["r", "rb"], ["c2", "c3"], ["s2", "s3"]);
    star.extend(s2);
    delta.extend(d2);
    build_bitrade(&BitradeInput { universes: Default::default(), star, delta }).expect("valid union")
}

/// The spherical instances bundled with the crate, by name.
pub fn spherical() -> Vec<(&'static str, Bitrade)> {
    vec![("intercalate", intercalate()), ("bitrade_4x5", example_4x5()), ("nested_intercalate", nested_intercalate())]
}

/// Spherical bitrade grown from the intercalate by grafting. Each step
/// `(base, face, point)` replaces a triangular face of the current bitrade
/// with one of [`spherical`] minus a star triple; indices wrap around.
pub fn grafted(steps: &[(usize, usize, usize)]) -> Bitrade {
    let bases = spherical();
    let mut cur = intercalate();
    for &(base, face, point) in steps {
        let inner = &bases[base % bases.len()].1;
        cur = crate::trigon::graft(&cur, face % cur.size(), inner, point % inner.size())
            .expect("grafting spherical bitrades yields a bitrade");
    }
    cur
}
