//! Exact linear algebra over `Z` and `Q`: dense matrices, Gaussian
//! elimination, Bareiss determinants and the Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ArithError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ArithError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self
    where
        T: One,
    {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// The matrix with the given columns removed.
    pub fn without_columns(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|j| !drop.contains(j)).collect();
        let mut m = Self::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            for (k, &j) in keep.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Mul for &Matrix<T>
where
    T: Clone + Zero,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .expect("rectangular input")
    }

    pub fn to_rational(&self) -> RatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| Rational::from_integer(v.clone())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Rational>),
    NoSolution { rank: usize },
    NonUnique { rank: usize },
}

/// Reduces `m` in place to reduced row echelon form; returns pivot columns.
fn rref(m: &mut RatMatrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..m.rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let d = &f * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    let cols = m.cols;
    rref(&mut m, cols).len()
}

pub fn int_rank(a: &IntMatrix) -> usize {
    rank(&a.to_rational())
}

/// Solves `a · x = b` exactly and classifies solvability. A unique solution
/// is always re-substituted before it is returned.
pub fn gauss_solve(a: &RatMatrix, b: &[Rational]) -> Result<SolveOutcome, ArithError> {
    if b.len() != a.rows {
        return Err(ArithError::Shape(format!("{} equations but {} right-hand sides", a.rows, b.len())));
    }
    let n = a.cols;
    let mut aug = RatMatrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = rref(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(SolveOutcome::NoSolution { rank: pivots.len() - 1 });
    }
    if pivots.len() < n {
        return Ok(SolveOutcome::NonUnique { rank: pivots.len() });
    }
    let x: Vec<Rational> = (0..n).map(|i| aug[(i, n)].clone()).collect();
    for i in 0..a.rows {
        let lhs = (0..n).fold(Rational::zero(), |acc, j| acc + &a[(i, j)] * &x[j]);
        assert_eq!(lhs, b[i], "re-substitution failed in equation {i}");
    }
    Ok(SolveOutcome::Unique(x))
}

/// Fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt, ArithError> {
    if !a.is_square() {
        return Err(ArithError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(p) => {
                    m.swap_rows(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = v / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Checks every postcondition by explicit multiplication.
    pub fn verify(&self, m: &IntMatrix) -> Result<(), String> {
        if &(&self.u * m) * &self.v != self.d {
            return Err("U·M·V differs from D".into());
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let expected = if i == j { self.diagonal[i].clone() } else { BigInt::zero() };
                if self.d[(i, j)] != expected {
                    return Err(format!("D is not diagonal at ({i},{j})"));
                }
            }
        }
        if self.diagonal.iter().any(|d| d.is_negative()) {
            return Err("negative invariant".into());
        }
        for w in self.diagonal.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("divisibility chain broken at {} | {}", w[0], w[1]));
            }
        }
        for (name, x) in [("U", &self.u), ("V", &self.v)] {
            let det = determinant(x).map_err(|e| e.to_string())?;
            if det.abs() != BigInt::one() {
                return Err(format!("{name} is not unimodular (det {det})"));
            }
        }
        Ok(())
    }
}

/// Row ops are mirrored on `u`, column ops on `v`.
struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let d = f * &m[(src, j)];
                m[(dst, j)] = &m[(dst, j)] + &d;
            }
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for i in 0..m.rows() {
                let d = f * &m[(i, src)];
                m[(i, dst)] = &m[(i, dst)] + &d;
            }
        }
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                m[(i, j)] = -m[(i, j)].clone();
            }
        }
    }
}

/// Smith normal form by elementary reduction with smallest-pivot selection.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer { a: m.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &r.a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < r.a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            let p = r.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !r.a[(i, t)].is_zero() {
                    let q = r.a[(i, t)].div_floor(&p);
                    r.add_row(i, t, &-q);
                    clean &= r.a[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !r.a[(t, j)].is_zero() {
                    let q = r.a[(t, j)].div_floor(&p);
                    r.add_col(j, t, &-q);
                    clean &= r.a[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !r.a[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| r.a[(i, i)].clone()).collect();
    let form = SmithForm { diagonal, d: r.a, u: r.u, v: r.v };
    debug_assert_eq!(form.verify(m), Ok(()));
    form
}

/// Integer left kernel `{x : x·A = 0}` as rows of a matrix.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let mut k = IntMatrix::zeros(a.rows() - rank, a.rows());
    for (out, i) in (rank..a.rows()).enumerate() {
        for j in 0..a.rows() {
            k[(out, j)] = snf.u[(i, j)].clone();
        }
    }
    k
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion; exponential, test-only oracle.
    pub(crate) fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn gcd_i64(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd_i64(b, a % b)
        }
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
        for s in &mut with {
            s.push(n - 1);
        }
        with.extend(subsets(n - 1, k));
        with
    }

    /// Invariant factors from determinantal divisors: `d_1⋯d_k` is the gcd
    /// of all `k×k` minors.
    fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i64> {
        let (rows, cols) = (m.len(), m[0].len());
        let mut divisors = vec![1i64];
        for k in 1..=rows.min(cols) {
            let mut g = 0;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = gcd_i64(g, cofactor_det(&sub));
                }
            }
            divisors.push(g);
        }
        (1..divisors.len()).map(|k| if divisors[k - 1] == 0 { 0 } else { divisors[k] / divisors[k - 1] }).collect()
    }

    fn intercalate_b() -> Vec<Vec<i64>> {
        vec![vec![1, 0, 1, 0, -1, 0], vec![1, 0, 0, 1, 0, -1], vec![0, 1, 1, 0, 0, -1], vec![0, 1, 0, 1, -1, 0]]
    }

    #[test]
    fn minors_oracle_on_intercalate() {
        assert_eq!(invariant_factors_by_minors(&intercalate_b()), vec![1, 1, 1, 2]);
    }

    #[test]
    fn snf_of_intercalate_relations() {
        let m = IntMatrix::from_i64(&intercalate_b());
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal, [1, 1, 1, 2].map(int).to_vec());
        f.verify(&m).unwrap();
    }

    #[test]
    fn snf_of_diag_2_3() {
        let m = IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal, vec![int(1), int(6)]);
        f.verify(&m).unwrap();
    }

    #[test]
    fn snf_of_zero_matrix() {
        let m = IntMatrix::zeros(3, 2);
        let f = smith_normal_form(&m);
        assert!(f.diagonal.iter().all(Zero::is_zero));
        f.verify(&m).unwrap();
    }

    #[test]
    fn bareiss_basics() {
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), int(1));
        let rep = IntMatrix::from_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]);
        assert_eq!(determinant(&rep).unwrap(), int(0));
        assert!(matches!(determinant(&IntMatrix::zeros(2, 3)), Err(ArithError::NotSquare { .. })));
    }

    #[test]
    fn intercalate_minor_determinant() {
        // columns r0 and s1 removed
        let b = intercalate_b();
        let minor: Vec<Vec<i64>> = b.iter().map(|r| vec![r[1], r[2], r[3], r[4]]).collect();
        let oracle = cofactor_det(&minor);
        assert_eq!(oracle.abs(), 2);
        let m = IntMatrix::from_i64(&b).without_columns(&[0, 5]);
        assert_eq!(determinant(&m).unwrap(), int(oracle));
    }

    #[test]
    fn gauss_classifications() {
        let id = IntMatrix::identity(3).to_rational();
        let v = vec![rat(1, 2), rat(-3, 1), rat(7, 5)];
        assert_eq!(gauss_solve(&id, &v).unwrap(), SolveOutcome::Unique(v.clone()));

        let sing = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).to_rational();
        assert_eq!(gauss_solve(&sing, &[rat(1, 1), rat(2, 1)]).unwrap(), SolveOutcome::NonUnique { rank: 1 });
        assert_eq!(gauss_solve(&sing, &[rat(1, 1), rat(3, 1)]).unwrap(), SolveOutcome::NoSolution { rank: 1 });
    }

    #[test]
    fn intercalate_pointed_system() {
        // unknowns (r1, c1, s1): c1 = s1, r1 = s1, r1 + c1 = 1
        let a = IntMatrix::from_i64(&[vec![0, 1, -1], vec![1, 0, -1], vec![1, 1, 0]]).to_rational();
        let b = vec![rat(0, 1), rat(0, 1), rat(1, 1)];
        assert_eq!(gauss_solve(&a, &b).unwrap(), SolveOutcome::Unique(vec![rat(1, 2); 3]));
    }

    #[test]
    fn left_kernel_annihilates() {
        let m = IntMatrix::from_i64(&[vec![1, 1], vec![2, 2], vec![0, 3]]);
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert!((&k * &m).row(0).iter().all(Zero::is_zero));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-4i64..=4, cols), rows)
    }

    proptest! {
        #[test]
        fn rationals_stay_canonical(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let (x, y) = (rat(a, b), rat(c, d));
            for r in [&x + &y, &x - &y, &x * &y] {
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(r.denom()).is_one());
            }
            if !y.is_zero() {
                let q = &x / &y;
                prop_assert!(q.denom().is_positive());
                prop_assert!(q.numer().gcd(q.denom()).is_one());
            }
        }

        #[test]
        fn determinant_matches_cofactor_and_transpose(m in small_matrix(4, 4)) {
            let im = IntMatrix::from_i64(&m);
            let d = determinant(&im).unwrap();
            prop_assert_eq!(&d, &int(cofactor_det(&m)));
            prop_assert_eq!(d, determinant(&im.transpose()).unwrap());
        }

        #[test]
        fn determinant_is_multiplicative(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            let (x, y) = (IntMatrix::from_i64(&a), IntMatrix::from_i64(&b));
            prop_assert_eq!(determinant(&(&x * &y)).unwrap(), determinant(&x).unwrap() * determinant(&y).unwrap());
        }

        #[test]
        fn snf_postconditions(m in small_matrix(3, 4)) {
            let im = IntMatrix::from_i64(&m);
            let f = smith_normal_form(&im);
            prop_assert_eq!(f.verify(&im), Ok(()));
            let expected: Vec<BigInt> = invariant_factors_by_minors(&m).into_iter().map(int).collect();
            prop_assert_eq!(f.diagonal, expected);
        }

        #[test]
        fn gauss_solution_resubstitutes(m in small_matrix(3, 3), b in proptest::collection::vec(-5i64..5, 3)) {
            let a = IntMatrix::from_i64(&m).to_rational();
            let rhs: Vec<Rational> = b.iter().map(|&v| rat(v, 1)).collect();
            if let SolveOutcome::Unique(x) = gauss_solve(&a, &rhs).unwrap() {
                for i in 0..3 {
                    let lhs = (0..3).fold(Rational::zero(), |acc, j| acc + &a[(i, j)] * &x[j]);
                    prop_assert_eq!(&lhs, &rhs[i]);
                }
            } else {
                prop_assert!(determinant(&IntMatrix::from_i64(&m)).unwrap().is_zero());
            }
        }
    }
}
