//! Quotient Bredon chain complex of the Davis complex.
//!
//! A cell of the quotient is a strictly increasing chain `T_1 ⊊ ... ⊊ T_n`
//! of spherical subsets (the empty set included); it has dimension `n - 1`
//! and stabilizer `W_{T_1}`. Every face of a chain is again a chain, so no
//! group elements enter the boundary.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::coxeter::{GeneratorSubset, SphericalPoset};
use crate::error::{Error, Result};
use crate::homology::{homology_at, FgAbGroup, IntegerMatrix};
use crate::repr::RepresentationRings;

/// Largest dense differential the chain route will allocate.
pub const MAX_DIFFERENTIAL_ENTRIES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientCell {
    pub chain: Vec<GeneratorSubset>,
}

impl QuotientCell {
    pub fn dimension(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn stabilizer(&self) -> GeneratorSubset {
        self.chain[0]
    }

    pub fn top(&self) -> GeneratorSubset {
        *self.chain.last().unwrap()
    }

    /// Face obtained by deleting the `k`-th member (0-based).
    pub fn face(&self, k: usize) -> QuotientCell {
        let mut chain = self.chain.clone();
        chain.remove(k);
        QuotientCell { chain }
    }
}

impl fmt::Display for QuotientCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(" < "))
    }
}

/// All strictly increasing chains of spherical subsets whose top has rank
/// at most `max_top_rank`, grouped by dimension and sorted lexicographically.
pub fn build_cells(poset: &SphericalPoset, max_top_rank: Option<usize>) -> Vec<Vec<QuotientCell>> {
    let limit = max_top_rank.unwrap_or(usize::MAX);
    let members: Vec<GeneratorSubset> = poset.iter().filter(|t| t.len() <= limit).collect();
    let mut by_dim: Vec<Vec<QuotientCell>> = Vec::new();
    let mut layer: Vec<QuotientCell> = members.iter().map(|&t| QuotientCell { chain: vec![t] }).collect();
    while !layer.is_empty() {
        layer.sort();
        let next: Vec<QuotientCell> = layer
            .iter()
            .flat_map(|cell| {
                let top = cell.top();
                members.iter().filter(move |t| top.is_proper_subset(**t)).map(move |&t| {
                    let mut chain = cell.chain.clone();
                    chain.push(t);
                    QuotientCell { chain }
                })
            })
            .collect();
        by_dim.push(layer);
        layer = next;
    }
    by_dim
}

/// Bredon chain complex with coefficients in the representation ring.
///
/// Degree `d` has one block of `c(W_{T_1})` coordinates per `d`-cell, in
/// the row order of that stabilizer's character table. `differentials[d]`
/// maps degree `d` to degree `d - 1` (rows index the target).
#[derive(Clone, Debug)]
pub struct BredonChainComplex {
    pub cells: Vec<Vec<QuotientCell>>,
    pub block_sizes: Vec<Vec<usize>>,
    pub offsets: Vec<Vec<usize>>,
    pub differentials: Vec<IntegerMatrix>,
}

impl BredonChainComplex {
    pub fn top_degree(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    /// Rank of the free module in degree `d`.
    pub fn dim(&self, d: usize) -> usize {
        self.block_sizes.get(d).map_or(0, |b| b.iter().sum())
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    /// `∂_{d-1} ∘ ∂_d = 0` in every degree.
    pub fn check_square_zero(&self) -> Result<()> {
        for d in 2..self.differentials.len() {
            if !self.differentials[d - 1].mul(&self.differentials[d]).is_zero() {
                return Err(Error::Consistency(format!("boundary squares to nonzero in degree {d}")));
            }
        }
        Ok(())
    }

    /// Homology in degree `d`.
    pub fn homology(&self, d: usize) -> Result<FgAbGroup> {
        let n = self.dim(d);
        let zero_out;
        let d_out = match self.differentials.get(d) {
            Some(m) => m,
            None => {
                zero_out = IntegerMatrix::zeros(0, n);
                &zero_out
            }
        };
        let zero_in;
        let d_in = match self.differentials.get(d + 1) {
            Some(m) => m,
            None => {
                zero_in = IntegerMatrix::zeros(n, 0);
                &zero_in
            }
        };
        homology_at(d_out, d_in)
    }

    /// Homology in every degree up to `max_degree` (inclusive).
    pub fn homology_profile(&self, max_degree: usize) -> Result<BTreeMap<usize, FgAbGroup>> {
        (0..=max_degree).map(|d| Ok((d, self.homology(d)?))).collect()
    }
}

/// Assembles the differentials from the chain cells and the induction data.
///
/// Deleting the `k`-th member (1-based) carries the sign `(-1)^k`. For
/// `k >= 2` the stabilizer is unchanged and the block is `±I`; for `k = 1`
/// it grows from `W_{T_1}` to `W_{T_2}` and the block is `±Ind`.
pub fn assemble_differentials(
    cells: Vec<Vec<QuotientCell>>,
    rings: &RepresentationRings,
) -> Result<BredonChainComplex> {
    let mut block_sizes = Vec::with_capacity(cells.len());
    let mut offsets = Vec::with_capacity(cells.len());
    let mut index: Vec<BTreeMap<&QuotientCell, usize>> = Vec::with_capacity(cells.len());
    for layer in &cells {
        let sizes = layer
            .iter()
            .map(|c| {
                rings.class_count(c.stabilizer()).ok_or_else(|| {
                    Error::Precondition(format!("no character table for {}", c.stabilizer()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut off = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            off.push(acc);
            acc += s;
        }
        block_sizes.push(sizes);
        offsets.push(off);
        index.push(layer.iter().enumerate().map(|(i, c)| (c, i)).collect());
    }

    let total = |d: usize| -> usize { block_sizes[d].iter().sum() };
    let mut differentials = Vec::with_capacity(cells.len());
    if !cells.is_empty() {
        differentials.push(IntegerMatrix::zeros(0, total(0)));
    }
    for d in 1..cells.len() {
        let (rows, cols) = (total(d - 1), total(d));
        if rows.saturating_mul(cols) > MAX_DIFFERENTIAL_ENTRIES {
            return Err(Error::Resource(format!(
                "differential d_{d} would be {rows} x {cols}, above {MAX_DIFFERENTIAL_ENTRIES} entries"
            )));
        }
    }
    for d in 1..cells.len() {
        let mut m = IntegerMatrix::zeros(total(d - 1), total(d));
        for (ci, cell) in cells[d].iter().enumerate() {
            let col0 = offsets[d][ci];
            for k in 0..cell.chain.len() {
                let face = cell.face(k);
                let fi = *index[d - 1].get(&face).ok_or_else(|| {
                    Error::Consistency(format!("face {face} of {cell} is not a cell"))
                })?;
                let row0 = offsets[d - 1][fi];
                // 1-based position k + 1
                let sign: i64 = if (k + 1) % 2 == 0 { 1 } else { -1 };
                if k == 0 {
                    let ind = rings.induction(cell.chain[0], cell.chain[1]).ok_or_else(|| {
                        Error::Precondition(format!(
                            "missing induction {} -> {}",
                            cell.chain[0], cell.chain[1]
                        ))
                    })?;
                    for (i, row) in ind.entries.iter().enumerate() {
                        for (j, &v) in row.iter().enumerate() {
                            if v != 0 {
                                m.set(row0 + i, col0 + j, BigInt::from(sign * v));
                            }
                        }
                    }
                } else {
                    for j in 0..block_sizes[d][ci] {
                        m.set(row0 + j, col0 + j, BigInt::from(sign));
                    }
                }
            }
        }
        differentials.push(m);
    }
    Ok(BredonChainComplex { cells, block_sizes, offsets, differentials })
}

/// Relative complex of the skeleton pair `(Σ_n, Σ_{n-1})`: the cells whose
/// top member has rank exactly `n`, with the differentials projected onto them.
pub fn relative_complex(full: &BredonChainComplex, n: usize) -> BredonChainComplex {
    let mut cells = Vec::new();
    let mut block_sizes = Vec::new();
    let mut offsets = Vec::new();
    let mut coords: Vec<Vec<usize>> = Vec::new();
    for (d, layer) in full.cells.iter().enumerate() {
        let mut kept = Vec::new();
        let mut sizes = Vec::new();
        let mut off = Vec::new();
        let mut cs = Vec::new();
        for (i, cell) in layer.iter().enumerate() {
            if cell.top().len() != n {
                continue;
            }
            off.push(cs.len());
            let size = full.block_sizes[d][i];
            cs.extend(full.offsets[d][i]..full.offsets[d][i] + size);
            kept.push(cell.clone());
            sizes.push(size);
        }
        cells.push(kept);
        block_sizes.push(sizes);
        offsets.push(off);
        coords.push(cs);
    }
    while cells.last().is_some_and(Vec::is_empty) {
        cells.pop();
        block_sizes.pop();
        offsets.pop();
        coords.pop();
    }
    let mut differentials = Vec::with_capacity(cells.len());
    if !cells.is_empty() {
        differentials.push(IntegerMatrix::zeros(0, coords[0].len()));
    }
    for d in 1..cells.len() {
        let src = &full.differentials[d];
        let mut m = IntegerMatrix::zeros(coords[d - 1].len(), coords[d].len());
        for (r, &fr) in coords[d - 1].iter().enumerate() {
            for (c, &fc) in coords[d].iter().enumerate() {
                m.set(r, c, src.get(fr, fc).clone());
            }
        }
        differentials.push(m);
    }
    BredonChainComplex { cells, block_sizes, offsets, differentials }
}

/// Full complex for a spherical poset and its representation data.
pub fn bredon_complex(poset: &SphericalPoset, rings: &RepresentationRings) -> Result<BredonChainComplex> {
    assemble_differentials(build_cells(poset, None), rings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{enumerate_spherical, parse_matrix, CoxeterMatrix};
    use crate::repr::DEFAULT_ORDER_CAP;

    fn complex(w: &CoxeterMatrix) -> BredonChainComplex {
        let poset = enumerate_spherical(w);
        let rings = RepresentationRings::build(w, &poset, DEFAULT_ORDER_CAP).unwrap();
        bredon_complex(&poset, &rings).unwrap()
    }

    /// Chains in a poset by brute force over all sequences of members.
    fn brute_chain_counts(members: &[GeneratorSubset]) -> Vec<usize> {
        fn extend(members: &[GeneratorSubset], chain: &mut Vec<GeneratorSubset>, counts: &mut Vec<usize>) {
            let d = chain.len() - 1;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
            for &t in members {
                if chain.last().unwrap().is_proper_subset(t) {
                    chain.push(t);
                    extend(members, chain, counts);
                    chain.pop();
                }
            }
        }
        let mut counts = Vec::new();
        for &t in members {
            extend(members, &mut vec![t], &mut counts);
        }
        counts
    }

    #[test]
    fn cells_of_infinite_dihedral() {
        let w = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        let cells = build_cells(&enumerate_spherical(&w), None);
        let a = GeneratorSubset::singleton(0);
        let b = GeneratorSubset::singleton(1);
        let e = GeneratorSubset::EMPTY;
        assert_eq!(
            cells[0].iter().map(|c| c.chain.clone()).collect::<Vec<_>>(),
            vec![vec![e], vec![a], vec![b]]
        );
        assert_eq!(
            cells[1].iter().map(|c| c.chain.clone()).collect::<Vec<_>>(),
            vec![vec![e, a], vec![e, b]]
        );
        assert_eq!(cells.len(), 2);
    }

    #[test]
    fn cells_of_rank_one() {
        let w = parse_matrix(&[vec![1]]).unwrap();
        let cells = build_cells(&enumerate_spherical(&w), None);
        assert_eq!(cells.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn cells_of_euclidean_triangle_match_brute_force() {
        let w = parse_matrix(&[vec![1, 2, 4], vec![2, 1, 4], vec![4, 4, 1]]).unwrap();
        let poset = enumerate_spherical(&w);
        let cells = build_cells(&poset, None);
        let counts: Vec<usize> = cells.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![7, 12, 6]);
        assert_eq!(counts, brute_chain_counts(&poset.iter().collect::<Vec<_>>()));
    }

    #[test]
    fn rank_one_boundary_is_induction_from_trivial() {
        let w = parse_matrix(&[vec![1]]).unwrap();
        let cx = complex(&w);
        // degree 0: (∅) -> 1 coordinate, ({s}) -> 2 coordinates
        assert_eq!(cx.dim(0), 3);
        let d1 = cx.differentials[1].to_i64_rows().unwrap();
        assert_eq!(d1, vec![vec![1], vec![-1], vec![-1]]);
    }

    #[test]
    fn triangle_top_differential_blocks() {
        let w = parse_matrix(&[vec![1, 2, 4], vec![2, 1, 4], vec![4, 4, 1]]).unwrap();
        let cx = complex(&w);
        assert_eq!(cx.cell_count(2), 6);
        for cell in &cx.cells[2] {
            assert_eq!((0..3).map(|k| cell.face(k)).filter(|f| cx.cells[1].contains(f)).count(), 3);
        }
        cx.check_square_zero().unwrap();
    }

    #[test]
    fn infinite_dihedral_homology() {
        let w = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        let cx = complex(&w);
        assert_eq!(cx.homology(0).unwrap(), FgAbGroup::free(3));
        assert_eq!(cx.homology(1).unwrap(), FgAbGroup::zero());
        assert_eq!(cx.homology(2).unwrap(), FgAbGroup::zero());
    }

    #[test]
    fn relative_pairs_in_low_rank() {
        let w = parse_matrix(&[vec![1]]).unwrap();
        let cx = complex(&w);
        let rel0 = relative_complex(&cx, 0);
        assert_eq!(rel0.cell_count(0), 1);
        assert_eq!(rel0.homology(0).unwrap(), FgAbGroup::free(1));
        let rel1 = relative_complex(&cx, 1);
        assert_eq!(rel1.cell_count(0), 1);
        assert_eq!(rel1.cell_count(1), 1);
        assert_eq!(rel1.homology(0).unwrap(), FgAbGroup::free(1));

        let w = parse_matrix(&[vec![1, 4], vec![4, 1]]).unwrap();
        let rel2 = relative_complex(&complex(&w), 2);
        assert_eq!(rel2.homology(0).unwrap(), FgAbGroup::free(2));
        assert!(rel2.homology(1).unwrap().is_zero());
        assert!(rel2.homology(2).unwrap().is_zero());
    }

    #[test]
    fn finite_group_collapses_to_class_count() {
        let w = parse_matrix(&[vec![1, 5], vec![5, 1]]).unwrap();
        let cx = complex(&w);
        assert_eq!(cx.homology(0).unwrap(), FgAbGroup::free(4));
        assert!(cx.homology(1).unwrap().is_zero());
        assert!(cx.homology(2).unwrap().is_zero());
    }
}
