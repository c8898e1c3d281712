//! Representation rings of the finite special subgroups and the induction
//! maps between them.

pub mod classes;
pub mod dixon;
pub mod group;
pub mod induction;
pub mod table;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coxeter::{classify, CoxeterMatrix, FiniteType, FiniteTypeLabel, GeneratorSubset, SphericalPoset};
use crate::error::{Error, Result};

pub use classes::{conjugacy_classes, ConjugacyClasses};
pub use dixon::dixon_table;
pub use group::{embed, realize_group, FiniteGroupModel, DEFAULT_ORDER_CAP};
pub use induction::{induction_matrix, restriction_matrix, InductionMatrix};
pub use table::{cyclic2_table, dihedral_table, tensor_table, CharacterTable, TableSource};

/// Table of the trivial group.
pub fn trivial_table(g: &FiniteGroupModel) -> CharacterTable {
    CharacterTable {
        classes: conjugacy_classes(g),
        names: vec!["1".into()],
        values: vec![vec![Complex64::new(1.0, 0.0)]],
        degrees: vec![1],
        source: TableSource::ClosedForm,
    }
}

/// Character table of `W_T` bound to the element indexing of `g`.
///
/// C2 and dihedral factors use closed forms, other irreducible types go
/// through Burnside–Dixon, and reducible groups are tensor products of
/// their component tables.
pub fn character_table(w: &CoxeterMatrix, g: &FiniteGroupModel) -> Result<CharacterTable> {
    let label = classify(w, g.subset());
    match label.components.as_slice() {
        [] => Ok(trivial_table(g)),
        [(ty, _)] => irreducible_table(g, *ty),
        comps => {
            let cap = g.order() as u128;
            let mut table: Option<CharacterTable> = None;
            let mut pairs: Vec<(usize, usize)> = vec![(0, g.identity())];
            for &(ty, comp) in comps {
                let sub = realize_group(w, comp, cap)?;
                let sub_table = irreducible_table(&sub, ty)?;
                let emb = embed(&sub, g)?;
                let o = sub.order();
                pairs = pairs
                    .iter()
                    .flat_map(|&(abs, e)| emb.iter().enumerate().map(move |(f, &x)| (abs * o + f, e, x)))
                    .map(|(abs, e, x)| (abs, g.mul(e, x)))
                    .collect();
                table = Some(match table {
                    None => sub_table,
                    Some(t) => tensor_table(&t, &sub_table),
                });
            }
            let table = table.expect("at least two components");
            let mut elem_map = vec![usize::MAX; g.order()];
            for (abs, e) in pairs {
                elem_map[e] = abs;
            }
            if elem_map.contains(&usize::MAX) {
                return Err(Error::Consistency(format!(
                    "component products do not exhaust the group on {}",
                    g.subset()
                )));
            }
            Ok(table.rebind(&elem_map))
        }
    }
}

fn irreducible_table(g: &FiniteGroupModel, ty: FiniteType) -> Result<CharacterTable> {
    match ty {
        FiniteType::A(1) => cyclic2_table(g),
        FiniteType::I2(_) => dihedral_table(g),
        FiniteType::Infinite => Err(Error::Precondition("no character table for an infinite group".into())),
        _ => dixon_table(g),
    }
}

/// One finite special subgroup with its realization and table.
#[derive(Clone, Debug)]
pub struct SubgroupData {
    pub subset: GeneratorSubset,
    pub label: FiniteTypeLabel,
    pub model: FiniteGroupModel,
    pub table: CharacterTable,
}

/// Tables of every spherical subgroup and induction matrices for every
/// inclusion `T ⊊ T'` of spherical subsets.
#[derive(Clone, Debug)]
pub struct RepresentationRings {
    pub subgroups: BTreeMap<GeneratorSubset, SubgroupData>,
    pub inductions: BTreeMap<(GeneratorSubset, GeneratorSubset), InductionMatrix>,
}

impl RepresentationRings {
    pub fn build(w: &CoxeterMatrix, poset: &SphericalPoset, cap: u128) -> Result<Self> {
        if let Some((t, &order)) = poset.order_of.iter().find(|(_, &o)| o > cap) {
            return Err(Error::Resource(format!(
                "spherical subgroup on {t} has order {order}, above the cap {cap}"
            )));
        }
        let mut subgroups = BTreeMap::new();
        for t in poset.iter() {
            let model = realize_group(w, t, cap)?;
            let table = character_table(w, &model)?;
            table.validate()?;
            let label = poset.label_of[&t].clone();
            subgroups.insert(t, SubgroupData { subset: t, label, model, table });
        }
        let mut inductions = BTreeMap::new();
        for (&k, small) in &subgroups {
            for (&l, big) in &subgroups {
                if !k.is_proper_subset(l) {
                    continue;
                }
                let emb = embed(&small.model, &big.model)?;
                inductions.insert((k, l), induction_matrix(&small.table, &big.table, &emb)?);
            }
        }
        Ok(Self { subgroups, inductions })
    }

    pub fn table(&self, t: GeneratorSubset) -> Option<&CharacterTable> {
        self.subgroups.get(&t).map(|s| &s.table)
    }

    /// `c(W_T)`, the rank of `R(W_T)`.
    pub fn class_count(&self, t: GeneratorSubset) -> Option<usize> {
        self.table(t).map(CharacterTable::len)
    }

    pub fn induction(&self, k: GeneratorSubset, l: GeneratorSubset) -> Option<&InductionMatrix> {
        self.inductions.get(&(k, l))
    }

    /// Induction equals the transpose of restriction, entrywise.
    pub fn check_frobenius(&self) -> Result<()> {
        for (&(k, l), ind) in &self.inductions {
            let (small, big) = (&self.subgroups[&k], &self.subgroups[&l]);
            let emb = embed(&small.model, &big.model)?;
            let res = restriction_matrix(&small.table, &big.table, &emb)?;
            if res.transpose() != *ind {
                return Err(Error::Consistency(format!("Frobenius reciprocity fails for {k} ⊆ {l}")));
            }
        }
        Ok(())
    }

    /// `Ind(K, M) = Ind(L, M) · Ind(K, L)` for every chain `K ⊊ L ⊊ M`.
    pub fn check_transitivity(&self) -> Result<()> {
        for (&(k, l), kl) in &self.inductions {
            for (&(l2, m), lm) in &self.inductions {
                if l2 != l {
                    continue;
                }
                let km = &self.inductions[&(k, m)];
                if lm.compose(kl) != *km {
                    return Err(Error::Consistency(format!(
                        "induction is not transitive along {k} ⊆ {l} ⊆ {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Column of the trivial character of `K` has a 1 in `L`'s trivial row,
    /// and induced degrees are `[L:K]` times the original ones.
    pub fn check_induction_degrees(&self) -> Result<()> {
        for (&(k, l), ind) in &self.inductions {
            let (tk, tl) = (&self.subgroups[&k].table, &self.subgroups[&l].table);
            if ind.entries[0][0] != 1 {
                return Err(Error::Consistency(format!("trivial character of {k} does not induce onto trivial of {l}")));
            }
            let index = (tl.order() / tk.order()) as i64;
            for j in 0..tk.len() {
                let deg: i64 = (0..tl.len()).map(|i| ind.entries[i][j] * tl.degrees[i] as i64).sum();
                if deg != index * tk.degrees[j] as i64 {
                    return Err(Error::Consistency(format!("induced degree mismatch for {k} ⊆ {l}")));
                }
            }
        }
        Ok(())
    }
}
