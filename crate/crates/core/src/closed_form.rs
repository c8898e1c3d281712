//! Closed-form Bredon homology: right-angled and even Coxeter groups, the
//! rank ≤ 3 catalog, relative Coxeter-cell formulas, Künneth products and
//! the passage to K-homology when the homology sits in degrees 0 and 1.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{
    classify, components, enumerate_spherical, CoxeterMatrix, FiniteType, GeneratorSubset, Order,
    SphericalPoset,
};
use crate::error::{Error, Result};
use crate::homology::FgAbGroup;
use crate::repr::{conjugacy_classes, realize_group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Chain,
    ClosedForm,
    Kunneth,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Chain => "chain",
            Method::ClosedForm => "closed-form",
            Method::Kunneth => "kunneth",
        })
    }
}

/// Homology groups by degree; absent degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub method: Method,
    /// Which formula or route produced the profile.
    pub detail: String,
    pub groups: BTreeMap<usize, FgAbGroup>,
}

impl HomologyProfile {
    pub fn new(method: Method, detail: impl Into<String>) -> Self {
        Self { method, detail: detail.into(), groups: BTreeMap::new() }
    }

    pub fn concentrated(method: Method, detail: impl Into<String>, h0: FgAbGroup) -> Self {
        Self::new(method, detail).with(0, h0)
    }

    pub fn with(mut self, degree: usize, g: FgAbGroup) -> Self {
        self.set(degree, g);
        self
    }

    pub fn set(&mut self, degree: usize, g: FgAbGroup) {
        if g.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, g);
        }
    }

    pub fn get(&self, degree: usize) -> FgAbGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn top_nonzero(&self) -> Option<usize> {
        self.groups.keys().next_back().copied()
    }

    /// Degree-by-degree equality, ignoring how the profiles were obtained.
    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        self.groups == other.groups
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "H_* = 0");
        }
        let parts: Vec<String> = self.groups.iter().map(|(d, g)| format!("H_{d} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// `c(D_n)`: `n/2 + 3` for even `n`, `(n-1)/2 + 2` for odd `n`.
pub fn dihedral_class_count(n: u32) -> usize {
    if n % 2 == 0 {
        n as usize / 2 + 3
    } else {
        (n as usize - 1) / 2 + 2
    }
}

/// Bredon homology of a right-angled group: `Z^s` in degree 0, `s` the
/// number of spherical subsets including the empty one.
pub fn right_angled_homology(w: &CoxeterMatrix) -> Result<HomologyProfile> {
    if !w.is_right_angled() {
        return Err(Error::Precondition(
            "not right-angled (entries must be 2 or infinity); use the even or chain method".into(),
        ));
    }
    let s = enumerate_spherical(w).total();
    Ok(HomologyProfile::concentrated(Method::ClosedForm, "right-angled", FgAbGroup::free(s)))
}

/// `prod_{i<j in T} m_ij / 2` for an even spherical `T`.
fn even_cell_rank(w: &CoxeterMatrix, t: GeneratorSubset) -> Result<usize> {
    let gens = t.to_vec();
    let mut r = 1usize;
    for (a, &i) in gens.iter().enumerate() {
        for &j in &gens[a + 1..] {
            match w.get(i, j) {
                Order::Finite(m) if m % 2 == 0 => r *= m as usize / 2,
                other => {
                    return Err(Error::Precondition(format!(
                        "entry m_{i}{j} = {other} in {t} is not even"
                    )))
                }
            }
        }
    }
    Ok(r)
}

/// `r(n)` for each rank `n`: the relative skeleton ranks of an even group.
pub fn even_rank_by_degree(w: &CoxeterMatrix, poset: &SphericalPoset) -> Result<Vec<usize>> {
    poset
        .by_rank
        .iter()
        .map(|layer| layer.iter().map(|&t| even_cell_rank(w, t)).sum())
        .collect()
}

/// Bredon homology of an even group: `Z^r` with `r = sum_T prod m_ij/2`.
pub fn even_homology(w: &CoxeterMatrix) -> Result<HomologyProfile> {
    if !w.is_even() {
        return Err(Error::Precondition(
            "not even (some m_ij is odd); use the chain method".into(),
        ));
    }
    let poset = enumerate_spherical(w);
    let r: usize = even_rank_by_degree(w, &poset)?.iter().sum();
    Ok(HomologyProfile::concentrated(Method::ClosedForm, "even", FgAbGroup::free(r)))
}

/// Relative homology of the Coxeter cell `(C_{W_T}, ∂C_{W_T})` for an even
/// spherical `T`, which is `Z^{prod m_ij/2}` in degree 0.
pub fn relative_cell_formula(w: &CoxeterMatrix, t: GeneratorSubset) -> Result<FgAbGroup> {
    let label = classify(w, t);
    let even = label.components.iter().all(|(ty, _)| match ty {
        FiniteType::A(1) => true,
        FiniteType::I2(m) => m % 2 == 0,
        _ => false,
    });
    if !even {
        return Err(Error::Precondition(format!("{t} ({label}) is not an even spherical subset")));
    }
    Ok(FgAbGroup::free(even_cell_rank(w, t)?))
}

/// Relative homology of the rank-2 cell of `I2(m)`, `m` odd:
/// `H_0 = Z^{(m-1)/2}`, `H_1 = Z`.
pub fn odd_dihedral_cell_formula(m: u32) -> Result<HomologyProfile> {
    if m % 2 == 0 || m < 3 {
        return Err(Error::Precondition(format!("m = {m} must be odd and at least 3")));
    }
    Ok(HomologyProfile::new(Method::ClosedForm, format!("odd dihedral cell I2({m})"))
        .with(0, FgAbGroup::free((m as usize - 1) / 2))
        .with(1, FgAbGroup::free(1)))
}

/// Relative homology of any rank-2 cell `I2(m)` with `m` finite.
pub fn dihedral_cell_formula(m: u32) -> Result<HomologyProfile> {
    if m % 2 == 1 {
        return odd_dihedral_cell_formula(m);
    }
    Ok(HomologyProfile::concentrated(
        Method::ClosedForm,
        format!("even dihedral cell I2({m})"),
        FgAbGroup::free(m as usize / 2),
    ))
}

/// Relative homology of the skeleton pair `(Σ_2, Σ_1)`: one rank-2 cell per
/// finite `m_ij`, so `H_0` sums `m/2` (even) and `(m-1)/2` (odd) and `H_1`
/// counts the odd labels. Infinite labels span no 2-cell and contribute nothing.
pub fn rank_two_skeleton_pair(w: &CoxeterMatrix) -> HomologyProfile {
    let (mut h0, mut h1) = (0usize, 0usize);
    for i in 0..w.rank() {
        for j in (i + 1)..w.rank() {
            if let Some(m) = w.get(i, j).finite() {
                h0 += m as usize / 2;
                h1 += m as usize % 2;
            }
        }
    }
    HomologyProfile::new(Method::ClosedForm, "rank-2 skeleton pair")
        .with(0, FgAbGroup::free(h0))
        .with(1, FgAbGroup::free(h1))
}

fn irreducible_class_count(ty: FiniteType) -> Option<usize> {
    Some(match ty {
        FiniteType::A(1) => 2,
        FiniteType::A(2) => 3,
        FiniteType::A(3) => 5,
        FiniteType::B(3) => 10,
        FiniteType::H3 => 10,
        FiniteType::I2(m) => dihedral_class_count(m),
        _ => return None,
    })
}

/// Catalog of Bredon homology for Coxeter systems of rank at most three.
pub fn lowrank_catalog(w: &CoxeterMatrix) -> Result<HomologyProfile> {
    let n = w.rank();
    if n > 3 {
        return Err(Error::Precondition(format!("rank {n} exceeds the low-rank catalog")));
    }
    let label = classify(w, w.all_generators());
    if label.is_finite() {
        let c = label
            .components
            .iter()
            .map(|(ty, _)| irreducible_class_count(*ty))
            .try_fold(1usize, |acc, c| c.map(|c| acc * c))
            .ok_or_else(|| Error::Precondition(format!("no class count recorded for {label}")))?;
        return Ok(HomologyProfile::concentrated(
            Method::ClosedForm,
            format!("finite group {label}"),
            FgAbGroup::free(c),
        ));
    }
    let cd = |o: Order| o.finite().map(dihedral_class_count);
    if n == 2 {
        return Ok(HomologyProfile::concentrated(Method::ClosedForm, "D_inf", FgAbGroup::free(3)));
    }
    let labels = [w.get(0, 1), w.get(1, 2), w.get(2, 0)];
    let finite: Vec<u32> = labels.iter().filter_map(|o| o.finite()).collect();
    let profile = match finite.as_slice() {
        [] => HomologyProfile::concentrated(Method::ClosedForm, "triangle (inf,inf,inf)", FgAbGroup::free(4)),
        [p] => HomologyProfile::concentrated(
            Method::ClosedForm,
            format!("triangle ({p},inf,inf)"),
            FgAbGroup::free(dihedral_class_count(*p) + 1),
        ),
        [p, q] => HomologyProfile::concentrated(
            Method::ClosedForm,
            format!("triangle ({p},{q},inf)"),
            FgAbGroup::free(dihedral_class_count(*p) + dihedral_class_count(*q) - 2),
        ),
        _ => {
            let total: usize = labels.iter().filter_map(|&o| cd(o)).sum();
            let all_odd = finite.iter().all(|m| m % 2 == 1);
            let detail = format!("triangle ({},{},{})", finite[0], finite[1], finite[2]);
            let p = HomologyProfile::new(Method::ClosedForm, detail);
            if all_odd {
                p.with(0, FgAbGroup::free(total - 4)).with(1, FgAbGroup::free(1))
            } else {
                p.with(0, FgAbGroup::free(total - 5))
            }
        }
    };
    Ok(profile)
}

/// Künneth formula for a direct product: tensor terms in degree `n` plus
/// Tor terms from degree `n - 1`, summed directly (the sequence splits).
pub fn kunneth_product(hg: &HomologyProfile, hh: &HomologyProfile) -> HomologyProfile {
    let mut out = HomologyProfile::new(Method::Kunneth, format!("({}) x ({})", hg.detail, hh.detail));
    let mut acc: BTreeMap<usize, FgAbGroup> = BTreeMap::new();
    for (&i, a) in &hg.groups {
        for (&j, b) in &hh.groups {
            let t = acc.entry(i + j).or_default();
            *t = t.direct_sum(&a.tensor(b));
            let tor = a.tor(b);
            if !tor.is_zero() {
                let t = acc.entry(i + j + 1).or_default();
                *t = t.direct_sum(&tor);
            }
        }
    }
    for (d, g) in acc {
        out.set(d, g);
    }
    out
}

/// Equivariant K-homology read off from Bredon homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum KHomology {
    /// Homology vanishes above degree 1: `K_0 = H_0`, `K_1 = H_1`.
    Determined { k0: FgAbGroup, k1: FgAbGroup },
    /// Some `H_i`, `i >= 2`, is nonzero; the E2 page is reported as is.
    Undecided { e2: BTreeMap<usize, FgAbGroup> },
}

pub fn k_homology(h: &HomologyProfile) -> KHomology {
    if h.groups.keys().any(|&d| d >= 2) {
        KHomology::Undecided { e2: h.groups.clone() }
    } else {
        KHomology::Determined { k0: h.get(0), k1: h.get(1) }
    }
}

/// Which closed form applies, in order of preference.
pub fn closed_form_homology(w: &CoxeterMatrix, cap: u128) -> Result<HomologyProfile> {
    let poset = enumerate_spherical(w);
    if poset.is_finite_group() {
        return finite_group_homology(w, cap);
    }
    if w.is_right_angled() {
        return right_angled_homology(w);
    }
    if w.is_even() {
        return even_homology(w);
    }
    if w.rank() <= 3 {
        return lowrank_catalog(w);
    }
    Err(Error::Precondition(
        "no closed form applies (needs finite, right-angled, even, or rank <= 3); use --method chain"
            .into(),
    ))
}

/// `H_0 = Z^{c(W)}` for finite `W`, with the class count taken from the
/// conjugation orbits of the realized group.
pub fn finite_group_homology(w: &CoxeterMatrix, cap: u128) -> Result<HomologyProfile> {
    let all = w.all_generators();
    let label = classify(w, all);
    if !label.is_finite() {
        return Err(Error::Precondition("the group is infinite".into()));
    }
    let c: usize = components(w, all)
        .into_iter()
        .map(|comp| realize_group(w, comp, cap).map(|g| conjugacy_classes(&g).len()))
        .product::<Result<usize>>()?;
    Ok(HomologyProfile::concentrated(
        Method::ClosedForm,
        format!("finite group {label}"),
        FgAbGroup::free(c),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::parse_matrix;
    use crate::repr::DEFAULT_ORDER_CAP;
    use num_bigint::BigUint;

    fn tri(p: i64, q: i64, r: i64) -> CoxeterMatrix {
        parse_matrix(&[vec![1, p, r], vec![p, 1, q], vec![r, q, 1]]).unwrap()
    }

    #[test]
    fn rank_two_pair_matches_relative_complex() {
        use crate::davis::relative_complex;
        for w in [tri(3, 4, 0), tri(5, 5, 5), tri(2, 0, 0), tri(6, 3, 2)] {
            let comp = crate::ChainComputation::run(&w, DEFAULT_ORDER_CAP).unwrap();
            let rel = relative_complex(&comp.complex, 2);
            let mut chain = HomologyProfile::new(Method::Chain, "pair");
            for d in 0..=2 {
                chain.set(d, rel.homology(d).unwrap());
            }
            assert!(rank_two_skeleton_pair(&w).same_groups(&chain), "{w}: {chain}");
        }
    }

    fn h0(p: &HomologyProfile) -> usize {
        p.get(0).free_rank
    }

    #[test]
    fn right_angled_examples() {
        let dinf = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(h0(&right_angled_homology(&dinf).unwrap()), 3);
        let path = parse_matrix(&[vec![1, 2, 0], vec![2, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(h0(&right_angled_homology(&path).unwrap()), 6);
        assert_eq!(h0(&right_angled_homology(&tri(2, 2, 2)).unwrap()), 8);
        assert!(right_angled_homology(&tri(3, 2, 2)).is_err());
    }

    #[test]
    fn even_examples() {
        assert_eq!(h0(&even_homology(&tri(2, 4, 4)).unwrap()), 9);
        let dinf = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        let dd = dinf.direct_product(&dinf).unwrap();
        assert_eq!(h0(&even_homology(&dd).unwrap()), 9);
        assert!(even_homology(&tri(3, 4, 4)).is_err());
        let path = parse_matrix(&[vec![1, 2, 0], vec![2, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(even_homology(&path).unwrap().groups, right_angled_homology(&path).unwrap().groups);
    }

    #[test]
    fn relative_cells() {
        let c2 = parse_matrix(&[vec![1]]).unwrap();
        assert_eq!(relative_cell_formula(&c2, c2.all_generators()).unwrap(), FgAbGroup::free(1));
        let i24 = parse_matrix(&[vec![1, 4], vec![4, 1]]).unwrap();
        assert_eq!(relative_cell_formula(&i24, i24.all_generators()).unwrap(), FgAbGroup::free(2));
        let prod = tri(4, 2, 2);
        assert_eq!(relative_cell_formula(&prod, prod.all_generators()).unwrap(), FgAbGroup::free(2));
        let i23 = parse_matrix(&[vec![1, 3], vec![3, 1]]).unwrap();
        assert!(relative_cell_formula(&i23, i23.all_generators()).is_err());
    }

    #[test]
    fn odd_dihedral_cells() {
        let p = odd_dihedral_cell_formula(3).unwrap();
        assert_eq!((p.get(0), p.get(1)), (FgAbGroup::free(1), FgAbGroup::free(1)));
        let p = odd_dihedral_cell_formula(5).unwrap();
        assert_eq!((p.get(0), p.get(1)), (FgAbGroup::free(2), FgAbGroup::free(1)));
        assert!(odd_dihedral_cell_formula(2).is_err());
    }

    #[test]
    fn catalog_examples() {
        let p = lowrank_catalog(&tri(3, 3, 3)).unwrap();
        assert_eq!((p.get(0), p.get(1)), (FgAbGroup::free(5), FgAbGroup::free(1)));
        assert_eq!(h0(&lowrank_catalog(&tri(3, 4, 0)).unwrap()), 6);
        assert_eq!(h0(&lowrank_catalog(&tri(0, 0, 0)).unwrap()), 4);
        assert_eq!(h0(&lowrank_catalog(&tri(2, 4, 4)).unwrap()), 9);
        assert_eq!(h0(&lowrank_catalog(&tri(5, 0, 0)).unwrap()), 5);
        // finite branch
        assert_eq!(h0(&lowrank_catalog(&tri(5, 3, 2)).unwrap()), 10);
    }

    #[test]
    fn kunneth_examples() {
        let z3 = HomologyProfile::concentrated(Method::Chain, "a", FgAbGroup::free(3));
        let p = kunneth_product(&z3, &z3);
        assert_eq!(p.get(0), FgAbGroup::free(9));
        assert_eq!(p.top_nonzero(), Some(0));

        let z2 = FgAbGroup::from_cyclic(0, [BigUint::from(2u32)]);
        let t = HomologyProfile::concentrated(Method::Chain, "t", z2.clone());
        let p = kunneth_product(&t, &t);
        assert_eq!(p.get(0), z2);
        assert_eq!(p.get(1), z2);
    }

    #[test]
    fn k_homology_guard() {
        let p = lowrank_catalog(&tri(3, 3, 3)).unwrap();
        assert_eq!(
            k_homology(&p),
            KHomology::Determined { k0: FgAbGroup::free(5), k1: FgAbGroup::free(1) }
        );
        let bad = HomologyProfile::concentrated(Method::Chain, "x", FgAbGroup::free(1))
            .with(2, FgAbGroup::free(1));
        assert!(matches!(k_homology(&bad), KHomology::Undecided { .. }));
    }

    #[test]
    fn finite_group_short_circuit() {
        let h3 = crate::coxeter::CoxeterMatrix::from_edges(
            3,
            &[(0, 1, Order::Finite(5)), (1, 2, Order::Finite(3))],
        )
        .unwrap();
        let p = closed_form_homology(&h3, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(h0(&p), 10);
    }
}
