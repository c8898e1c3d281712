//! Finite special subgroups realized as permutation groups on their root systems.

use std::collections::HashMap;

use crate::coxeter::{classify, CoxeterMatrix, GeneratorSubset};
use crate::error::{Error, Result};

/// Default cap on `|W_T|` for concrete realization (the order of H4).
pub const DEFAULT_ORDER_CAP: u128 = 14_400;

const ROOT_TOL: f64 = 1e-9;

/// A finite Coxeter group `W_T` acting by permutations on its roots.
///
/// Element 0 is the identity. Elements are stored in breadth-first order
/// from the identity with generators tried in increasing index order, so
/// each stored word is the shortlex-least word for its element.
#[derive(Clone, Debug)]
pub struct FiniteGroupModel {
    subset: GeneratorSubset,
    generators: Vec<usize>,
    roots: Vec<Vec<f64>>,
    perms: Vec<Vec<u16>>,
    words: Vec<Vec<u8>>,
    inverses: Vec<usize>,
    index: HashMap<Vec<u16>, usize>,
    gen_elements: Vec<usize>,
}

impl FiniteGroupModel {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn subset(&self) -> GeneratorSubset {
        self.subset
    }

    /// Global generator indices, increasing.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn permutation(&self, g: usize) -> &[u16] {
        &self.perms[g]
    }

    /// Shortlex-least word, as global generator indices.
    pub fn word(&self, g: usize) -> &[u8] {
        &self.words[g]
    }

    /// Element of the global generator `s`.
    pub fn generator_element(&self, s: usize) -> Option<usize> {
        self.subset.position(s).map(|p| self.gen_elements[p])
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// Product `gh` (apply `h` first).
    pub fn mul(&self, g: usize, h: usize) -> usize {
        let pg = &self.perms[g];
        let ph = &self.perms[h];
        let key: Vec<u16> = (0..self.generators.len())
            .map(|i| pg[ph[i] as usize])
            .collect();
        self.index[&key]
    }

    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inverses[x])
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut h = g;
        while h != 0 {
            h = self.mul(h, g);
            k += 1;
        }
        k
    }

    /// Looks up an element by its full root permutation.
    pub fn find(&self, perm: &[u16]) -> Option<usize> {
        self.index.get(&perm[..self.generators.len()]).copied()
    }

    /// Breadth-first closure of the generator permutations.
    fn close(
        subset: GeneratorSubset,
        roots: Vec<Vec<f64>>,
        gen_perms: Vec<Vec<u16>>,
        limit: u128,
    ) -> Result<Self> {
        let generators = subset.to_vec();
        let rank = generators.len();
        let nroots = roots.len();
        let identity: Vec<u16> = (0..nroots as u16).collect();
        let mut perms = vec![identity.clone()];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(identity[..rank].to_vec(), 0usize);
        let mut head = 0;
        while head < perms.len() {
            for (gi, gp) in gen_perms.iter().enumerate() {
                let next: Vec<u16> = gp.iter().map(|&r| perms[head][r as usize]).collect();
                if index.contains_key(&next[..rank]) {
                    continue;
                }
                if perms.len() as u128 >= limit {
                    return Err(Error::Consistency(format!(
                        "closure for {subset} exceeded {limit} elements"
                    )));
                }
                let mut w = words[head].clone();
                w.push(generators[gi] as u8);
                index.insert(next[..rank].to_vec(), perms.len());
                perms.push(next);
                words.push(w);
            }
            head += 1;
        }
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u16; nroots];
                for (i, &j) in p.iter().enumerate() {
                    inv[j as usize] = i as u16;
                }
                index[&inv[..rank]]
            })
            .collect();
        let gen_elements = gen_perms.iter().map(|p| index[&p[..rank]]).collect();
        Ok(Self { subset, generators, roots, perms, words, inverses, index, gen_elements })
    }
}

/// Realizes `W_T` by closing the simple roots of `t` under the reflection
/// action of the cosine form and recording each element as a root permutation.
pub fn realize_group(w: &CoxeterMatrix, t: GeneratorSubset, cap: u128) -> Result<FiniteGroupModel> {
    let expected = classify(w, t).order().ok_or_else(|| {
        Error::Precondition(format!("special subgroup on {t} is infinite"))
    })?;
    if expected > cap {
        return Err(Error::Resource(format!(
            "special subgroup on {t} has order {expected}, above the cap {cap}"
        )));
    }
    let gens = t.to_vec();
    let n = gens.len();
    let form: Vec<Vec<f64>> = gens
        .iter()
        .map(|&i| {
            gens.iter()
                .map(|&j| if i == j { 1.0 } else { w.get(i, j).cosine_entry() })
                .collect()
        })
        .collect();
    let reflect = |i: usize, v: &[f64]| -> Vec<f64> {
        let pairing: f64 = (0..n).map(|j| form[i][j] * v[j]).sum();
        let mut out = v.to_vec();
        out[i] -= 2.0 * pairing;
        out
    };
    let find = |roots: &[Vec<f64>], v: &[f64]| {
        roots
            .iter()
            .position(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() < ROOT_TOL))
    };

    let mut roots: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    // A finite reflection group has at most |W| roots.
    let root_limit = expected.min(1 << 16) as usize;
    let mut head = 0;
    while head < roots.len() {
        for i in 0..n {
            let img = reflect(i, &roots[head]);
            if find(&roots, &img).is_none() {
                if roots.len() >= root_limit {
                    return Err(Error::Consistency(format!(
                        "root closure for {t} did not terminate within {root_limit} roots"
                    )));
                }
                roots.push(img);
            }
        }
        head += 1;
    }
    let gen_perms: Vec<Vec<u16>> = (0..n)
        .map(|i| {
            roots
                .iter()
                .map(|r| find(&roots, &reflect(i, r)).expect("root set is closed") as u16)
                .collect()
        })
        .collect();
    let model = FiniteGroupModel::close(t, roots, gen_perms, expected)?;
    if model.order() as u128 != expected {
        return Err(Error::Consistency(format!(
            "closure for {t} produced {} elements, classification predicts {expected}",
            model.order()
        )));
    }
    Ok(model)
}

/// Maps every element of `sub` into `big`, following the same words.
/// The generators of `sub` must be among those of `big`.
pub fn embed(sub: &FiniteGroupModel, big: &FiniteGroupModel) -> Result<Vec<usize>> {
    if !sub.subset().is_subset(big.subset()) {
        return Err(Error::Precondition(format!(
            "{} is not a subset of {}",
            sub.subset(),
            big.subset()
        )));
    }
    let mut map = vec![usize::MAX; sub.order()];
    map[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let g = queue[head];
        head += 1;
        for &s in sub.generators() {
            let gs = sub.mul(g, sub.generator_element(s).unwrap());
            if map[gs] != usize::MAX {
                continue;
            }
            map[gs] = big.mul(map[g], big.generator_element(s).unwrap());
            queue.push(gs);
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{parse_matrix, Order};

    #[test]
    fn rank_one_group() {
        let w = parse_matrix(&[vec![1]]).unwrap();
        let g = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.root_count(), 2);
        assert_eq!(g.roots()[1], vec![-1.0]);
    }

    #[test]
    fn dihedral_of_order_six() {
        let w = parse_matrix(&[vec![1, 3], vec![3, 1]]).unwrap();
        let g = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.root_count(), 6);
        for s in [0, 1] {
            let e = g.generator_element(s).unwrap();
            assert_eq!(g.mul(e, e), 0);
        }
        let ab = g.mul(g.generator_element(0).unwrap(), g.generator_element(1).unwrap());
        assert_eq!(g.element_order(ab), 3);
    }

    #[test]
    fn h3_closure_reaches_120() {
        let w = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(5)), (1, 2, Order::Finite(3))])
            .unwrap();
        let g = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.root_count(), 30);
    }

    #[test]
    fn cap_and_infinite_are_rejected() {
        let w = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(5)), (1, 2, Order::Finite(3))])
            .unwrap();
        let err = realize_group(&w, w.all_generators(), 100).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        let dinf = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            realize_group(&dinf, dinf.all_generators(), DEFAULT_ORDER_CAP),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn words_are_shortlex_and_inverses_work() {
        let w = parse_matrix(&[vec![1, 4], vec![4, 1]]).unwrap();
        let g = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        let words: Vec<&[u8]> = (0..g.order()).map(|e| g.word(e)).collect();
        let mut sorted = words.clone();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(words, sorted);
        for e in 0..g.order() {
            assert_eq!(g.mul(e, g.inverse(e)), 0);
        }
    }

    #[test]
    fn embedding_follows_words() {
        let w = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(5)), (1, 2, Order::Finite(3))])
            .unwrap();
        let big = realize_group(&w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap();
        let t = GeneratorSubset::from_indices([0, 1]);
        let sub = realize_group(&w, t, DEFAULT_ORDER_CAP).unwrap();
        let map = embed(&sub, &big).unwrap();
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 10);
        for a in 0..sub.order() {
            for b in 0..sub.order() {
                assert_eq!(map[sub.mul(a, b)], big.mul(map[a], map[b]));
            }
        }
    }
}
