//! Coxeter matrices, diagram classification and the poset of spherical subsets.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of generators; subsets are stored as 64-bit masks.
pub const MAX_RANK: usize = 64;

/// Order of a product `s_i s_j`, either a positive integer or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// Integer encoding used in files: `0` stands for infinity.
    pub fn from_raw(v: i64) -> Option<Self> {
        match v {
            0 => Some(Order::Infinite),
            v if v >= 1 && v <= u32::MAX as i64 => Some(Order::Finite(v as u32)),
            _ => None,
        }
    }

    pub fn to_raw(self) -> i64 {
        match self {
            Order::Finite(m) => m as i64,
            Order::Infinite => 0,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    /// Whether `i - j` is an edge of the Coxeter diagram.
    pub fn is_edge(self) -> bool {
        !matches!(self, Order::Finite(1) | Order::Finite(2))
    }

    /// Entry `-cos(pi/m)` of the cosine form, `-1` for infinity.
    pub fn cosine_entry(self) -> f64 {
        match self {
            Order::Finite(m) => -(PI / m as f64).cos(),
            Order::Infinite => -1.0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A validated Coxeter matrix `(m_ij)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    m: Vec<Order>,
}

impl CoxeterMatrix {
    /// Validates a square integer matrix where `0` encodes infinity.
    pub fn from_raw(raw: &[Vec<i64>]) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        if n > MAX_RANK {
            return Err(Error::InvalidMatrix(format!(
                "rank {n} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        for (i, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        let mut m = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = raw[i][j];
                let at = format!("({},{})", i + 1, j + 1);
                if i == j {
                    if v != 1 {
                        return Err(Error::InvalidMatrix(format!("diagonal entry {v} at {at}")));
                    }
                    m.push(Order::Finite(1));
                    continue;
                }
                if v != raw[j][i] {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric: entry {v} at {at} but {} at ({},{})",
                        raw[j][i],
                        j + 1,
                        i + 1
                    )));
                }
                match Order::from_raw(v) {
                    Some(o @ Order::Finite(2..)) | Some(o @ Order::Infinite) => m.push(o),
                    _ => {
                        return Err(Error::InvalidMatrix(format!(
                            "off-diagonal entry {v} at {at} (must be >= 2, or 0 for infinity)"
                        )))
                    }
                }
            }
        }
        Ok(Self { rank: n, m })
    }

    /// Builds a matrix from a list of `(i, j, m_ij)` with every other
    /// off-diagonal entry equal to 2.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, Order)]) -> Result<Self> {
        let mut raw = vec![vec![2i64; rank]; rank];
        for (i, row) in raw.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, o) in edges {
            if i >= rank || j >= rank {
                return Err(Error::InvalidMatrix(format!("edge ({i},{j}) out of range")));
            }
            raw[i][j] = o.to_raw();
            raw[j][i] = o.to_raw();
        }
        Self::from_raw(&raw)
    }

    /// Block-diagonal matrix of a direct product, cross entries 2.
    pub fn direct_product(&self, other: &CoxeterMatrix) -> Result<Self> {
        let n = self.rank + other.rank;
        let mut raw = vec![vec![2i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                raw[i][j] = if i == j {
                    1
                } else if i < self.rank && j < self.rank {
                    self.get(i, j).to_raw()
                } else if i >= self.rank && j >= self.rank {
                    other.get(i - self.rank, j - self.rank).to_raw()
                } else {
                    2
                };
            }
        }
        Self::from_raw(&raw)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> Order {
        self.m[i * self.rank + j]
    }

    pub fn to_raw(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.get(i, j).to_raw()).collect())
            .collect()
    }

    pub fn all_generators(&self) -> GeneratorSubset {
        GeneratorSubset::full(self.rank)
    }

    /// Off-diagonal entries all in `{2, inf}`.
    pub fn is_right_angled(&self) -> bool {
        self.off_diagonal()
            .all(|o| matches!(o, Order::Finite(2) | Order::Infinite))
    }

    /// Off-diagonal entries all even or infinite.
    pub fn is_even(&self) -> bool {
        self.off_diagonal().all(|o| match o {
            Order::Finite(m) => m % 2 == 0,
            Order::Infinite => true,
        })
    }

    fn off_diagonal(&self) -> impl Iterator<Item = Order> + '_ {
        (0..self.rank).flat_map(move |i| ((i + 1)..self.rank).map(move |j| self.get(i, j)))
    }

    /// Restriction to `t`, with generators renumbered `0..|t|` in increasing order.
    pub fn restrict(&self, t: GeneratorSubset) -> CoxeterMatrix {
        let idx: Vec<usize> = t.iter().collect();
        let n = idx.len();
        let mut m = Vec::with_capacity(n * n);
        for &i in &idx {
            for &j in &idx {
                m.push(self.get(i, j));
            }
        }
        CoxeterMatrix { rank: n, m }
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rank {
            let row: Vec<String> = (0..self.rank).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// JSON input format shared by the CLI: `{"rank": N, "m": [[...]]}`, `0` = infinity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixFile {
    pub rank: usize,
    pub m: Vec<Vec<i64>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<CoxeterMatrix> {
        if self.rank != self.m.len() {
            return Err(Error::InvalidMatrix(format!(
                "declared rank {} but matrix has {} rows",
                self.rank,
                self.m.len()
            )));
        }
        CoxeterMatrix::from_raw(&self.m)
    }
}

impl From<&CoxeterMatrix> for MatrixFile {
    fn from(w: &CoxeterMatrix) -> Self {
        MatrixFile { rank: w.rank(), m: w.to_raw() }
    }
}

/// Parses the raw integer form; `0` denotes infinity.
pub fn parse_matrix(raw: &[Vec<i64>]) -> Result<CoxeterMatrix> {
    CoxeterMatrix::from_raw(raw)
}

/// A set of generator indices, stored as a bitmask.
///
/// Ordering is by cardinality first, then lexicographic on the sorted members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GeneratorSubset(u64);

impl GeneratorSubset {
    pub const EMPTY: GeneratorSubset = GeneratorSubset(0);

    pub fn full(rank: usize) -> Self {
        if rank >= 64 {
            GeneratorSubset(u64::MAX)
        } else {
            GeneratorSubset((1u64 << rank) - 1)
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        GeneratorSubset(mask)
    }

    pub fn singleton(i: usize) -> Self {
        GeneratorSubset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        GeneratorSubset(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: GeneratorSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: GeneratorSubset) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn with(self, i: usize) -> Self {
        GeneratorSubset(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        GeneratorSubset(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: GeneratorSubset) -> Self {
        GeneratorSubset(self.0 | other.0)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of generator `i` inside the sorted member list.
    pub fn position(self, i: usize) -> Option<usize> {
        self.contains(i)
            .then(|| (self.0 & ((1u64 << i) - 1)).count_ones() as usize)
    }
}

impl Ord for GeneratorSubset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for GeneratorSubset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GeneratorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Irreducible Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
    Infinite,
}

impl FiniteType {
    pub fn is_finite(self) -> bool {
        self != FiniteType::Infinite
    }

    /// Group order, saturating at `u128::MAX`. `None` for infinite types.
    pub fn order(self) -> Option<u128> {
        let fact = |n: usize| (1..=n as u128).fold(1u128, |a, k| a.saturating_mul(k));
        let pow2 = |n: usize| 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
        Some(match self {
            FiniteType::A(n) => fact(n + 1),
            FiniteType::B(n) => pow2(n).saturating_mul(fact(n)),
            FiniteType::D(n) => pow2(n - 1).saturating_mul(fact(n)),
            FiniteType::E6 => 51_840,
            FiniteType::E7 => 2_903_040,
            FiniteType::E8 => 696_729_600,
            FiniteType::F4 => 1_152,
            FiniteType::H3 => 120,
            FiniteType::H4 => 14_400,
            FiniteType::I2(m) => 2 * m as u128,
            FiniteType::Infinite => return None,
        })
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => write!(f, "E6"),
            FiniteType::E7 => write!(f, "E7"),
            FiniteType::E8 => write!(f, "E8"),
            FiniteType::F4 => write!(f, "F4"),
            FiniteType::H3 => write!(f, "H3"),
            FiniteType::H4 => write!(f, "H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
            FiniteType::Infinite => write!(f, "Infinite"),
        }
    }
}

/// Classification of a subset: one type per connected component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTypeLabel {
    pub components: Vec<(FiniteType, GeneratorSubset)>,
}

impl FiniteTypeLabel {
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|(t, _)| t.is_finite())
    }

    pub fn order(&self) -> Option<u128> {
        self.components
            .iter()
            .try_fold(1u128, |acc, (t, _)| t.order().map(|o| acc.saturating_mul(o)))
    }
}

impl fmt::Display for FiniteTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(t, _)| t.to_string())
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Connected components of the Coxeter diagram induced on `t`
/// (edge `i - j` iff `m_ij >= 3` or infinite), ordered by smallest member.
pub fn components(w: &CoxeterMatrix, t: GeneratorSubset) -> Vec<GeneratorSubset> {
    let mut out = Vec::new();
    let mut left = t;
    while let Some(start) = left.iter().next() {
        let mut comp = GeneratorSubset::singleton(start);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in left.iter() {
                if !comp.contains(j) && w.get(i, j).is_edge() {
                    comp = comp.with(j);
                    stack.push(j);
                }
            }
        }
        left = GeneratorSubset::from_mask(left.mask() & !comp.mask());
        out.push(comp);
    }
    out
}

/// Recognizes a connected diagram as one of the finite irreducible types.
pub fn classify_irreducible(w: &CoxeterMatrix, t: GeneratorSubset) -> FiniteType {
    let gens = t.to_vec();
    let n = gens.len();
    debug_assert!(
        n > 0 && components(w, t).len() == 1,
        "classify_irreducible needs a connected subset"
    );
    match n {
        0 => return FiniteType::Infinite,
        1 => return FiniteType::A(1),
        2 => {
            return match w.get(gens[0], gens[1]) {
                Order::Finite(m) => FiniteType::I2(m),
                Order::Infinite => FiniteType::Infinite,
            }
        }
        _ => {}
    }

    // Edges, labels restricted to {3,4,5}.
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    let mut edges = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            let o = w.get(gens[a], gens[b]);
            if !o.is_edge() {
                continue;
            }
            match o {
                Order::Finite(m @ 3..=5) => {
                    adj[a].push((b, m));
                    adj[b].push((a, m));
                    edges += 1;
                }
                _ => return FiniteType::Infinite,
            }
        }
    }
    if edges != n - 1 {
        return FiniteType::Infinite;
    }
    let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
    let branch: Vec<usize> = (0..n).filter(|&v| degrees[v] >= 3).collect();

    if branch.is_empty() {
        // A path: read labels from one end.
        let start = (0..n).find(|&v| degrees[v] == 1).expect("tree has a leaf");
        let mut labels = Vec::with_capacity(n - 1);
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = adj[cur].iter().find(|&&(v, _)| v != prev).copied();
            match next {
                Some((v, m)) => {
                    labels.push(m);
                    prev = cur;
                    cur = v;
                }
                None => break,
            }
        }
        return classify_path(&labels);
    }

    if branch.len() != 1 || degrees[branch[0]] != 3 {
        return FiniteType::Infinite;
    }
    if adj.iter().flatten().any(|&(_, m)| m != 3) {
        return FiniteType::Infinite;
    }
    let centre = branch[0];
    let mut arms: Vec<usize> = adj[centre]
        .iter()
        .map(|&(first, _)| {
            let (mut prev, mut cur, mut len) = (centre, first, 1);
            while let Some(&(v, _)) = adj[cur].iter().find(|&&(v, _)| v != prev) {
                prev = cur;
                cur = v;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, k] => FiniteType::D(k + 3),
        [1, 2, 2] => FiniteType::E6,
        [1, 2, 3] => FiniteType::E7,
        [1, 2, 4] => FiniteType::E8,
        _ => FiniteType::Infinite,
    }
}

fn classify_path(labels: &[u32]) -> FiniteType {
    let n = labels.len() + 1;
    let count = |m: u32| labels.iter().filter(|&&l| l == m).count();
    let terminal = |m: u32| labels.first() == Some(&m) || labels.last() == Some(&m);
    match (count(4), count(5)) {
        (0, 0) => FiniteType::A(n),
        (1, 0) if terminal(4) => FiniteType::B(n),
        (1, 0) if labels == [3, 4, 3] => FiniteType::F4,
        (0, 1) if terminal(5) && n == 3 => FiniteType::H3,
        (0, 1) if terminal(5) && n == 4 => FiniteType::H4,
        _ => FiniteType::Infinite,
    }
}

/// Full classification of `t` by connected components.
pub fn classify(w: &CoxeterMatrix, t: GeneratorSubset) -> FiniteTypeLabel {
    FiniteTypeLabel {
        components: components(w, t)
            .into_iter()
            .map(|c| (classify_irreducible(w, c), c))
            .collect(),
    }
}

/// `Some(|W_T|)` when `W_T` is finite.
pub fn spherical_order(w: &CoxeterMatrix, t: GeneratorSubset) -> Option<u128> {
    classify(w, t).order()
}

pub fn is_spherical(w: &CoxeterMatrix, t: GeneratorSubset) -> bool {
    spherical_order(w, t).is_some()
}

/// Positive-definiteness of the cosine form restricted to `t`, by leading
/// principal minors in floating point.
pub fn numeric_finiteness_check(w: &CoxeterMatrix, t: GeneratorSubset) -> bool {
    const TOL: f64 = 1e-9;
    let gens = t.to_vec();
    let n = gens.len();
    let b: Vec<Vec<f64>> = gens
        .iter()
        .map(|&i| {
            gens.iter()
                .map(|&j| if i == j { 1.0 } else { w.get(i, j).cosine_entry() })
                .collect()
        })
        .collect();
    (1..=n).all(|k| determinant(&b, k) > TOL)
}

fn determinant(b: &[Vec<f64>], k: usize) -> f64 {
    let mut a: Vec<Vec<f64>> = b[..k].iter().map(|r| r[..k].to_vec()).collect();
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..k {
            let f = a[r][col] / a[col][col];
            for c in col..k {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// All spherical subsets graded by cardinality, with group orders and labels.
#[derive(Clone, Debug)]
pub struct SphericalPoset {
    pub rank: usize,
    pub by_rank: Vec<Vec<GeneratorSubset>>,
    pub order_of: BTreeMap<GeneratorSubset, u128>,
    pub label_of: BTreeMap<GeneratorSubset, FiniteTypeLabel>,
}

impl SphericalPoset {
    /// `s(n)`, the number of spherical subsets of cardinality `n`.
    pub fn count(&self, n: usize) -> usize {
        self.by_rank.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.order_of.len()
    }

    pub fn contains(&self, t: GeneratorSubset) -> bool {
        self.order_of.contains_key(&t)
    }

    pub fn iter(&self) -> impl Iterator<Item = GeneratorSubset> + '_ {
        self.by_rank.iter().flatten().copied()
    }

    /// `W` itself is finite.
    pub fn is_finite_group(&self) -> bool {
        self.contains(GeneratorSubset::full(self.rank))
    }
}

/// Enumerates spherical subsets rank by rank, extending only subsets whose
/// every facet is already spherical.
pub fn enumerate_spherical(w: &CoxeterMatrix) -> SphericalPoset {
    let n = w.rank();
    let mut by_rank: Vec<Vec<GeneratorSubset>> = vec![vec![GeneratorSubset::EMPTY]];
    let mut order_of = BTreeMap::new();
    let mut label_of = BTreeMap::new();
    order_of.insert(GeneratorSubset::EMPTY, 1);
    label_of.insert(GeneratorSubset::EMPTY, FiniteTypeLabel { components: vec![] });

    for k in 0..n {
        let mut next = Vec::new();
        for &t in &by_rank[k] {
            let lo = t.max_index().map_or(0, |m| m + 1);
            for j in lo..n {
                let cand = t.with(j);
                if !cand.iter().all(|i| order_of.contains_key(&cand.without(i))) {
                    continue;
                }
                let label = classify(w, cand);
                if let Some(order) = label.order() {
                    order_of.insert(cand, order);
                    label_of.insert(cand, label);
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        by_rank.push(next);
    }
    SphericalPoset { rank: n, by_rank, order_of, label_of }
}
