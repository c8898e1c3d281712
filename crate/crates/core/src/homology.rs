//! Exact integer linear algebra: Smith normal form and homology of free chain complexes.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Self { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn at(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_i64()).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.at(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c];
            if !v.is_zero() {
                let d = v * q;
                self.data[dst * self.cols + c] -= d;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src];
            if !v.is_zero() {
                let d = v * q;
                self.data[r * self.cols + dst] -= d;
            }
        }
    }

    /// Rows `from..` as a new matrix.
    fn tail_rows(&self, from: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows: self.rows - from,
            cols: self.cols,
            data: self.data[from * self.cols..].to_vec(),
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Position of the smallest nonzero |entry| in the block `[t.., t..]`;
/// ties go to the smallest row, then column.
fn min_pivot(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows {
        for c in t..a.cols {
            let v = a.get(r, c);
            if v.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((br, bc)) => v.magnitude() < a.get(br, bc).magnitude(),
            };
            if better {
                best = Some((r, c));
                if v.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith normal form by elementary row and column operations.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let mut a = a.clone();
    let n = a.rows.min(a.cols);
    let mut diagonal = Vec::new();
    for t in 0..n {
        let Some((pr, pc)) = min_pivot(&a, t) else { break };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for r in (t + 1)..a.rows {
                if a.get(r, t).is_zero() {
                    continue;
                }
                let q = a.get(r, t).div_floor(a.get(t, t));
                a.sub_row(r, t, &q);
                if !a.get(r, t).is_zero() {
                    dirty = true;
                }
            }
            for c in (t + 1)..a.cols {
                if a.get(t, c).is_zero() {
                    continue;
                }
                let q = a.get(t, c).div_floor(a.get(t, t));
                a.sub_col(c, t, &q);
                if !a.get(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder smaller than the pivot survived; move it in.
                let (pr, pc) = min_pivot_cross(&a, t);
                a.swap_rows(t, pr);
                a.swap_cols(t, pc);
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let p = a.get(t, t).clone();
            let offender = ((t + 1)..a.rows).find(|&r| {
                ((t + 1)..a.cols).any(|c| !a.get(r, c).is_multiple_of(&p))
            });
            match offender {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    a.sub_row(t, r, &minus_one);
                }
                None => break,
            }
        }
        diagonal.push(a.get(t, t).abs());
    }
    SmithForm { diagonal }
}

/// Smallest nonzero entry in row `t` or column `t` (from `t` on).
fn min_pivot_cross(a: &IntegerMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_mag: Option<BigUint> = None;
    let cells = (t..a.rows).map(|r| (r, t)).chain(((t + 1)..a.cols).map(|c| (t, c)));
    for (r, c) in cells {
        let v = a.get(r, c);
        if v.is_zero() {
            continue;
        }
        if best_mag.as_ref().is_none_or(|m| v.magnitude() < m) {
            best = (r, c);
            best_mag = Some(v.magnitude().clone());
        }
    }
    best
}

/// Column echelon reduction `a * v = [E | 0]` with unimodular `v` tracked
/// together with its inverse. Returns `(rank, v, v_inv)`.
fn column_echelon(a: &IntegerMatrix) -> (usize, IntegerMatrix, IntegerMatrix) {
    let mut a = a.clone();
    let n = a.cols;
    let mut v = IntegerMatrix::identity(n);
    let mut v_inv = IntegerMatrix::identity(n);
    let mut pc = 0;
    for r in 0..a.rows {
        if pc == n {
            break;
        }
        loop {
            let pivot = (pc..n)
                .filter(|&c| !a.get(r, c).is_zero())
                .min_by(|&x, &y| a.get(r, x).magnitude().cmp(a.get(r, y).magnitude()));
            let Some(c0) = pivot else { break };
            a.swap_cols(pc, c0);
            v.swap_cols(pc, c0);
            v_inv.swap_rows(pc, c0);
            let mut done = true;
            for c in (pc + 1)..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let q = a.get(r, c).div_floor(a.get(r, pc));
                a.sub_col(c, pc, &q);
                v.sub_col(c, pc, &q);
                // inverse: row[pc] += q * row[c]
                let neg = -q;
                v_inv.sub_row(pc, c, &neg);
                if !a.get(r, c).is_zero() {
                    done = false;
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
    }
    (pc, v, v_inv)
}

/// Finitely generated abelian group `Z^free ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`, `d_i | d_{i+1}`, `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_factors", deserialize_with = "de_factors")]
    pub torsion: Vec<BigUint>,
}

impl FgAbGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    /// Normalizes arbitrary cyclic orders into an invariant-factor chain.
    /// Factors equal to 1 vanish; a factor 0 counts as a free summand.
    pub fn from_cyclic<I: IntoIterator<Item = BigUint>>(free_rank: usize, orders: I) -> Self {
        let mut free_rank = free_rank;
        let mut orders: Vec<BigUint> = orders
            .into_iter()
            .filter(|d| {
                if d.is_zero() {
                    free_rank += 1;
                }
                !d.is_zero() && !d.is_one()
            })
            .collect();
        let needs_normalizing = orders.windows(2).any(|w| !w[1].is_multiple_of(&w[0]));
        if needs_normalizing {
            let k = orders.len();
            let mut m = IntegerMatrix::zeros(k, k);
            for (i, d) in orders.iter().enumerate() {
                m.set(i, i, BigInt::from_biguint(Sign::Plus, d.clone()));
            }
            orders = smith_normal_form(&m)
                .diagonal
                .into_iter()
                .filter_map(|d| d.to_biguint())
                .filter(|d| !d.is_one())
                .collect();
        }
        Self { free_rank, torsion: orders }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::from_cyclic(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// `A ⊗ B` over the integers.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut cyclic = Vec::new();
        for d in &other.torsion {
            cyclic.extend(std::iter::repeat_n(d.clone(), self.free_rank));
        }
        for d in &self.torsion {
            cyclic.extend(std::iter::repeat_n(d.clone(), other.free_rank));
        }
        for d in &self.torsion {
            for e in &other.torsion {
                cyclic.push(d.gcd(e));
            }
        }
        FgAbGroup::from_cyclic(self.free_rank * other.free_rank, cyclic)
    }

    /// `Tor(A, B)`; only torsion pairs contribute.
    pub fn tor(&self, other: &FgAbGroup) -> FgAbGroup {
        let cyclic = self
            .torsion
            .iter()
            .flat_map(|d| other.torsion.iter().map(move |e| d.gcd(e)));
        FgAbGroup::from_cyclic(0, cyclic)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn ser_factors<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for d in v {
        match d.to_u64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

fn de_factors<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Factor {
        Small(u64),
        Big(String),
    }
    let raw: Vec<Factor> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|f| match f {
            Factor::Small(x) => Ok(BigUint::from(x)),
            Factor::Big(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

/// `ker(d_out) / im(d_in)` where `d_out: Z^n -> Z^m` and `d_in: Z^k -> Z^n`.
pub fn homology_at(d_out: &IntegerMatrix, d_in: &IntegerMatrix) -> Result<FgAbGroup> {
    let n = d_out.cols();
    if d_in.rows() != n {
        return Err(Error::Precondition(format!(
            "incompatible differentials: {} columns out, {} rows in",
            n,
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::Precondition("composite of differentials is not zero".into()));
    }
    let (rank_out, _v, v_inv) = column_echelon(d_out);
    let coords = v_inv.mul(d_in);
    if !(0..rank_out).all(|r| (0..coords.cols()).all(|c| coords.get(r, c).is_zero())) {
        return Err(Error::Consistency(
            "image of incoming differential leaves the kernel basis".into(),
        ));
    }
    let in_kernel = coords.tail_rows(rank_out);
    let snf = smith_normal_form(&in_kernel);
    let free_rank = (n - rank_out) - snf.rank();
    let torsion = snf.diagonal.into_iter().filter_map(|d| d.to_biguint());
    Ok(FgAbGroup::from_cyclic(free_rank, torsion))
}

/// Integral basis of the kernel, as the columns of the returned matrix.
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let (rank, v, _) = column_echelon(a);
    let n = a.cols();
    let mut out = IntegerMatrix::zeros(n, n - rank);
    for r in 0..n {
        for c in rank..n {
            out.set(r, c - rank, v.get(r, c).clone());
        }
    }
    out
}

pub fn rank(a: &IntegerMatrix) -> usize {
    column_echelon(a).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn diag(a: &IntegerMatrix) -> Vec<i64> {
        smith_normal_form(a).diagonal.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_of_row_of_ones() {
        assert_eq!(diag(&m(&[&[1, 1, 1, 1]])), vec![1]);
    }

    #[test]
    fn snf_of_zero_matrix() {
        assert!(diag(&IntegerMatrix::zeros(3, 2)).is_empty());
        assert!(diag(&IntegerMatrix::zeros(0, 4)).is_empty());
    }

    #[test]
    fn snf_enforces_divisibility() {
        assert_eq!(diag(&m(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(diag(&m(&[&[4, 0], &[0, 6]])), vec![2, 12]);
        assert_eq!(diag(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), vec![2, 6, 12]);
    }

    #[test]
    fn snf_even_dihedral_d1() {
        // Induction from two C2's into D_4 (chi1 chi2 chi3 chi4 phi1 phi2).
        let d1 = m(&[
            &[1, 0, 1, 0, 1, 1],
            &[0, 1, 0, 1, 1, 1],
            &[1, 0, 0, 1, 1, 1],
            &[0, 1, 1, 0, 1, 1],
        ]);
        assert_eq!(diag(&d1), vec![1, 1, 1]);
    }

    #[test]
    fn homology_torsion_and_free() {
        let h = homology_at(&IntegerMatrix::zeros(0, 1), &m(&[&[2]])).unwrap();
        assert_eq!(h, FgAbGroup::from_cyclic(0, [BigUint::from(2u32)]));
        let h = homology_at(&m(&[&[0, 0]]), &m(&[&[1], &[1]])).unwrap();
        assert_eq!(h, FgAbGroup::free(1));
        let h = homology_at(&IntegerMatrix::zeros(0, 3), &IntegerMatrix::zeros(3, 0)).unwrap();
        assert_eq!(h, FgAbGroup::free(3));
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let err = homology_at(&m(&[&[1, 0]]), &m(&[&[1], &[0]])).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn homology_of_nontrivial_kernel() {
        // d_out kills (1,-1,0) and (0,0,1); d_in hits 2*(1,-1,0).
        let d_out = m(&[&[1, 1, 0]]);
        let d_in = m(&[&[2], &[-2], &[0]]);
        let h = homology_at(&d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.torsion, vec![BigUint::from(2u32)]);
    }

    #[test]
    fn direct_sums() {
        let z2 = FgAbGroup::from_cyclic(0, [BigUint::from(2u32)]);
        let z3 = FgAbGroup::from_cyclic(0, [BigUint::from(3u32)]);
        assert_eq!(FgAbGroup::free(2).direct_sum(&FgAbGroup::free(3)), FgAbGroup::free(5));
        assert_eq!(z2.direct_sum(&z2).torsion, vec![BigUint::from(2u32); 2]);
        assert_eq!(z2.direct_sum(&z3).torsion, vec![BigUint::from(6u32)]);
    }

    #[test]
    fn tensor_and_tor() {
        let z2 = FgAbGroup::from_cyclic(0, [BigUint::from(2u32)]);
        let z4 = FgAbGroup::from_cyclic(1, [BigUint::from(4u32)]);
        assert_eq!(FgAbGroup::free(2).tensor(&FgAbGroup::free(3)), FgAbGroup::free(6));
        assert_eq!(z2.tor(&z2), z2);
        assert_eq!(FgAbGroup::free(5).tor(&z2), FgAbGroup::zero());
        // (Z + Z/4) ⊗ Z/2 = Z/2 + Z/2
        assert_eq!(z4.tensor(&z2).torsion, vec![BigUint::from(2u32); 2]);
    }

    #[test]
    fn serializes_as_plain_numbers() {
        let g = FgAbGroup::from_cyclic(2, [BigUint::from(2u32)]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":2,"torsion":[2]}"#);
        let back: FgAbGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
