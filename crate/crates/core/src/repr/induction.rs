//! Induction `R(K) -> R(L)` for special subgroups `K ⊆ L`.

use num_complex::Complex64;

use super::table::{round_integral, CharacterTable};
use crate::error::{Error, Result};

/// Integer matrix of induction: rows are the irreducibles of `L`, columns
/// those of `K`; entry `(i, j)` is the multiplicity of `psi_i` in `Ind chi_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl InductionMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn transpose(&self) -> InductionMatrix {
        let (r, c) = (self.rows(), self.cols());
        InductionMatrix {
            entries: (0..c).map(|j| (0..r).map(|i| self.entries[i][j]).collect()).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &InductionMatrix) -> InductionMatrix {
        let n = other.cols();
        InductionMatrix {
            entries: self
                .entries
                .iter()
                .map(|row| {
                    (0..n)
                        .map(|j| row.iter().enumerate().map(|(k, &a)| a * other.entries[k][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Class fusion `K -> L`: the `L`-class of each `K`-class, given the
/// embedding of `K`'s elements into `L`'s element indexing.
pub fn class_fusion(k: &CharacterTable, l: &CharacterTable, embedding: &[usize]) -> Result<Vec<usize>> {
    if embedding.len() != k.order() {
        return Err(Error::Precondition(format!(
            "embedding covers {} elements, subgroup has {}",
            embedding.len(),
            k.order()
        )));
    }
    let mut fusion = vec![usize::MAX; k.classes.len()];
    for (x, &cls) in k.classes.class_of.iter().enumerate() {
        let target = l.classes.class_of[embedding[x]];
        if fusion[cls] == usize::MAX {
            fusion[cls] = target;
        } else if fusion[cls] != target {
            return Err(Error::Consistency("subgroup class splits in the larger group".into()));
        }
    }
    Ok(fusion)
}

/// Induced character of `chi` (a class function of `K`) as a class function of `L`:
/// `Ind chi(g) = |L| / (|K| |g^L|) * sum_{h in K ∩ g^L} chi(h)`.
pub fn induced_character(
    k: &CharacterTable,
    l: &CharacterTable,
    fusion: &[usize],
    chi: &[Complex64],
) -> Vec<Complex64> {
    let mut sums = vec![Complex64::new(0.0, 0.0); l.classes.len()];
    for (c, &target) in fusion.iter().enumerate() {
        sums[target] += chi[c] * k.classes.sizes[c] as f64;
    }
    let ratio = l.order() as f64 / k.order() as f64;
    sums.iter()
        .zip(&l.classes.sizes)
        .map(|(s, &size)| s * ratio / size as f64)
        .collect()
}

/// Induction matrix from the induced-character formula and inner products in `L`.
pub fn induction_matrix(
    k: &CharacterTable,
    l: &CharacterTable,
    embedding: &[usize],
) -> Result<InductionMatrix> {
    let fusion = class_fusion(k, l, embedding)?;
    let mut entries = vec![vec![0i64; k.len()]; l.len()];
    for (j, chi) in k.values.iter().enumerate() {
        let induced = induced_character(k, l, &fusion, chi);
        for (i, psi) in l.values.iter().enumerate() {
            let m = round_integral(l.inner_product(&induced, psi))?;
            if m < 0 {
                return Err(Error::Consistency(format!("negative induction multiplicity {m}")));
            }
            entries[i][j] = m;
        }
    }
    Ok(InductionMatrix { entries })
}

/// Restriction `R(L) -> R(K)`: column `i` decomposes `Res psi_i` over `K`'s irreducibles.
pub fn restriction_matrix(
    k: &CharacterTable,
    l: &CharacterTable,
    embedding: &[usize],
) -> Result<InductionMatrix> {
    let fusion = class_fusion(k, l, embedding)?;
    let entries = l
        .values
        .iter()
        .map(|psi| {
            let restricted: Vec<Complex64> = fusion.iter().map(|&t| psi[t]).collect();
            k.decompose(&restricted)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InductionMatrix { entries }.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{parse_matrix, GeneratorSubset};
    use crate::repr::group::{embed, realize_group, DEFAULT_ORDER_CAP};
    use crate::repr::table::{cyclic2_table, dihedral_table};

    #[test]
    fn c2_into_dihedral() {
        for m in [4i64, 5, 6] {
            let w = parse_matrix(&[vec![1, m], vec![m, 1]]).unwrap();
            let big = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
            let l = dihedral_table(&big).unwrap();
            let sub = realize_group(&w, GeneratorSubset::singleton(0), DEFAULT_ORDER_CAP).unwrap();
            let k = cyclic2_table(&sub).unwrap();
            let ind = induction_matrix(&k, &l, &embed(&sub, &big).unwrap()).unwrap();
            let col: Vec<i64> = ind.entries.iter().map(|r| r[0]).collect();
            let mut expected = vec![1, 0];
            if m % 2 == 0 {
                expected.extend([1, 0]);
            }
            let phis = if m % 2 == 0 { m / 2 - 1 } else { (m - 1) / 2 };
            expected.extend(std::iter::repeat_n(1, phis as usize));
            assert_eq!(col, expected, "Ind(rho1) for m = {m}");
        }
    }

    #[test]
    fn trivial_into_c2_is_regular() {
        let w = parse_matrix(&[vec![1]]).unwrap();
        let big = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        let sub = realize_group(&w, GeneratorSubset::EMPTY, DEFAULT_ORDER_CAP).unwrap();
        let l = cyclic2_table(&big).unwrap();
        let k = crate::repr::trivial_table(&sub);
        let ind = induction_matrix(&k, &l, &embed(&sub, &big).unwrap()).unwrap();
        assert_eq!(ind.entries, vec![vec![1], vec![1]]);
    }

    #[test]
    fn self_induction_is_identity() {
        let w = parse_matrix(&[vec![1, 5], vec![5, 1]]).unwrap();
        let g = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        let t = dihedral_table(&g).unwrap();
        let id: Vec<usize> = (0..g.order()).collect();
        let ind = induction_matrix(&t, &t, &id).unwrap();
        for (i, row) in ind.entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, i64::from(i == j));
            }
        }
    }
}
