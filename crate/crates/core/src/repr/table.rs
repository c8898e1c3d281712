//! Character tables: closed forms for C2 and dihedral groups, tensor
//! products for direct products.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::classes::{conjugacy_classes, ConjugacyClasses};
use super::group::FiniteGroupModel;
use crate::error::{Error, Result};

/// Tolerance for rounding character inner products to integers.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSource {
    ClosedForm,
    Tensor,
    Dixon,
}

/// Complex character table of a finite group, bound to an element indexing.
///
/// `values[i][j]` is the value of the `i`-th irreducible character on class `j`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: ConjugacyClasses,
    pub names: Vec<String>,
    pub values: Vec<Vec<Complex64>>,
    pub degrees: Vec<u64>,
    pub source: TableSource,
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.classes.group_order()
    }

    /// Number of irreducible characters, `c(G)`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(1/|G|) sum_j |C_j| a_j conj(b_j)`
    pub fn inner_product(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let total: Complex64 = self
            .classes
            .sizes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&s, (x, y))| *x * y.conj() * s as f64)
            .sum();
        total / self.order() as f64
    }

    /// Multiplicities of the irreducibles in a class function, each checked
    /// to be within tolerance of an integer.
    pub fn decompose(&self, f: &[Complex64]) -> Result<Vec<i64>> {
        self.values
            .iter()
            .map(|chi| round_integral(self.inner_product(f, chi)))
            .collect()
    }

    /// Row orthogonality, degree sum and squareness.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n != self.classes.len() {
            return Err(Error::Consistency(format!(
                "{n} characters for {} classes",
                self.classes.len()
            )));
        }
        let deg_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if deg_sq != self.order() as u64 {
            return Err(Error::Consistency(format!(
                "squared degrees sum to {deg_sq}, group order is {}",
                self.order()
            )));
        }
        for i in 0..n {
            for k in 0..n {
                let ip = self.inner_product(&self.values[i], &self.values[k]);
                let target = if i == k { 1.0 } else { 0.0 };
                if (ip - Complex64::new(target, 0.0)).norm() > INTEGRALITY_TOL {
                    return Err(Error::Consistency(format!(
                        "characters {} and {} have inner product {ip}",
                        self.names[i], self.names[k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Re-indexes the table onto another element set through `elem_map`,
    /// which sends each new element to its index in the current indexing.
    pub fn rebind(&self, elem_map: &[usize]) -> CharacterTable {
        let class_of: Vec<usize> = elem_map.iter().map(|&e| self.classes.class_of[e]).collect();
        CharacterTable {
            classes: ConjugacyClasses::from_assignment(class_of, self.classes.len()),
            ..self.clone()
        }
    }
}

pub(crate) fn round_integral(z: Complex64) -> Result<i64> {
    let r = z.re.round();
    if (z - Complex64::new(r, 0.0)).norm() > INTEGRALITY_TOL {
        return Err(Error::Consistency(format!("expected an integer, got {z}")));
    }
    Ok(r as i64)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Table of the cyclic group of order two: `rho1`, `rho2`.
pub fn cyclic2_table(g: &FiniteGroupModel) -> Result<CharacterTable> {
    if g.order() != 2 {
        return Err(Error::Precondition(format!("C2 table needs a group of order 2, got {}", g.order())));
    }
    Ok(CharacterTable {
        classes: conjugacy_classes(g),
        names: vec!["rho1".into(), "rho2".into()],
        values: vec![vec![real(1.0), real(1.0)], vec![real(1.0), real(-1.0)]],
        degrees: vec![1, 1],
        source: TableSource::ClosedForm,
    })
}

/// Closed-form table of the dihedral group of order `2n` on generators
/// `(s0, s1)`, with `b = s0`, `a = s1`, rotations `(ab)^k` and reflections
/// `b(ab)^k`. Characters: `chi1, chi2, chi3, chi4` (the last two only for
/// even `n`) and `phi_l` for `1 <= l < n/2`.
pub fn dihedral_table(g: &FiniteGroupModel) -> Result<CharacterTable> {
    let gens = g.generators();
    if gens.len() != 2 {
        return Err(Error::Precondition("dihedral table needs two generators".into()));
    }
    let n = g.order() / 2;
    let b = g.generator_element(gens[0]).unwrap();
    let a = g.generator_element(gens[1]).unwrap();
    let ab = g.mul(a, b);

    // Element -> (is_reflection, k)
    let mut form = vec![None; g.order()];
    let mut rot = g.identity();
    for k in 0..n {
        form[rot] = Some((false, k));
        form[g.mul(b, rot)] = Some((true, k));
        rot = g.mul(rot, ab);
    }
    let classes = conjugacy_classes(g);
    let rep_forms = classes
        .reps
        .iter()
        .map(|&r| form[r].ok_or_else(|| Error::Consistency("dihedral element not in normal form".into())))
        .collect::<Result<Vec<_>>>()?;

    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut names = Vec::new();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut degrees = Vec::new();
    let mut push = |name: String, deg: u64, f: &dyn Fn(bool, usize) -> f64| {
        names.push(name);
        degrees.push(deg);
        rows.push(rep_forms.iter().map(|&(refl, k)| real(f(refl, k))).collect());
    };
    push("chi1".into(), 1, &|_, _| 1.0);
    push("chi2".into(), 1, &|refl, _| if refl { -1.0 } else { 1.0 });
    if n % 2 == 0 {
        push("chi3".into(), 1, &|_, k| sign(k));
        push("chi4".into(), 1, &|refl, k| if refl { -sign(k) } else { sign(k) });
    }
    // phi_{n/2} would split as chi3 + chi4, so even n stops one short.
    let phis = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for l in 1..=phis {
        push(format!("phi{l}"), 2, &|refl, k| {
            if refl {
                0.0
            } else {
                2.0 * (2.0 * PI * (l * k) as f64 / n as f64).cos()
            }
        });
    }
    Ok(CharacterTable { classes, names, values: rows, degrees, source: TableSource::ClosedForm })
}

/// Table of `P x Q` on the abstract product whose elements are indexed
/// row-major, `(p, q) -> p * |Q| + q`. Classes and characters are ordered
/// the same way (`P` outer, `Q` inner).
pub fn tensor_table(p: &CharacterTable, q: &CharacterTable) -> CharacterTable {
    let (np, nq) = (p.classes.len(), q.classes.len());
    let oq = q.order();
    let mut class_of = Vec::with_capacity(p.order() * oq);
    for &cp in &p.classes.class_of {
        for &cq in &q.classes.class_of {
            class_of.push(cp * nq + cq);
        }
    }
    let classes = ConjugacyClasses {
        reps: p
            .classes
            .reps
            .iter()
            .flat_map(|&rp| q.classes.reps.iter().map(move |&rq| rp * oq + rq))
            .collect(),
        sizes: p
            .classes
            .sizes
            .iter()
            .flat_map(|&sp| q.classes.sizes.iter().map(move |&sq| sp * sq))
            .collect(),
        class_of,
    };
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut degrees = Vec::new();
    for (i, chi) in p.values.iter().enumerate() {
        for (k, psi) in q.values.iter().enumerate() {
            names.push(format!("{}*{}", p.names[i], q.names[k]));
            degrees.push(p.degrees[i] * q.degrees[k]);
            values.push(
                (0..np)
                    .flat_map(|a| (0..nq).map(move |b| (a, b)))
                    .map(|(a, b)| chi[a] * psi[b])
                    .collect(),
            );
        }
    }
    CharacterTable { classes, names, values, degrees, source: TableSource::Tensor }
}
