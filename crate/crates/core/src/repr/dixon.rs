//! Burnside–Dixon character tables: simultaneous eigenvectors of the class
//! multiplication matrices over a prime field, lifted to complex values.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use super::classes::{conjugacy_classes, ConjugacyClasses};
use super::group::FiniteGroupModel;
use super::table::{CharacterTable, TableSource};
use crate::error::{Error, Result};

const PRIME_SEARCH_LIMIT: u64 = 1 << 30;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p ≡ 1 (mod exponent)` with `p > 2 sqrt(order)`.
pub fn choose_prime(exponent: u64, order: u64) -> Result<u64> {
    let bound = 2.0 * (order as f64).sqrt();
    let mut p = exponent + 1;
    while p < PRIME_SEARCH_LIMIT {
        if p as f64 > bound && is_prime(p) {
            return Ok(p);
        }
        p += exponent;
    }
    Err(Error::Resource(format!(
        "no admissible prime below {PRIME_SEARCH_LIMIT} for exponent {exponent}"
    )))
}

/// An element of order `exponent` in the multiplicative group mod `p`.
fn root_of_unity(exponent: u64, p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    let generator = (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime field has a generator");
    pow_mod(generator, (p - 1) / exponent, p)
}

/// Reduced row echelon basis of a subspace of `F_p^n`.
#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn from_vectors(mut rows: Vec<Vec<u64>>, p: u64) -> Self {
        let n = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = inv_mod(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..n {
                        rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Self { rows, pivots }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Null space of a square matrix over `F_p`, as coordinate vectors.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let reduced = Subspace::from_vectors(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !reduced.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Splits `space` into eigenspaces of the operator `m` (column convention),
/// which must leave it invariant and act diagonalizably.
fn split(space: &Subspace, m: &[Vec<u64>], p: u64) -> Result<Vec<Subspace>> {
    let k = space.dim();
    let n = m.len();
    // images[i] = M b_i; coordinates are read off at the pivots.
    let images: Vec<Vec<u64>> = space
        .rows
        .iter()
        .map(|b| {
            (0..n)
                .map(|r| (0..n).fold(0, |acc, c| (acc + m[r][c] * b[c]) % p))
                .collect()
        })
        .collect();
    // Coordinate action: c -> A^T c with A[i][l] = images[i][pivot_l].
    let at: Vec<Vec<u64>> = (0..k)
        .map(|l| (0..k).map(|i| images[i][space.pivots[l]]).collect())
        .collect();
    let mut parts = Vec::new();
    let mut found = 0;
    for lambda in 0..p {
        let shifted: Vec<Vec<u64>> = at
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| if i == j { (x + p - lambda) % p } else { x })
                    .collect()
            })
            .collect();
        let ns = null_space(&shifted, p);
        if ns.is_empty() {
            continue;
        }
        found += ns.len();
        let vectors = ns
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| (0..k).fold(0, |acc, i| (acc + c[i] * space.rows[i][j]) % p))
                    .collect()
            })
            .collect();
        parts.push(Subspace::from_vectors(vectors, p));
        if found == k {
            return Ok(parts);
        }
    }
    Err(Error::Consistency(format!(
        "class matrix is not diagonalizable mod {p} ({found} of {k} dimensions)"
    )))
}

/// Character table by the Burnside–Dixon method.
pub fn dixon_table(g: &FiniteGroupModel) -> Result<CharacterTable> {
    let classes = conjugacy_classes(g);
    dixon_with_classes(g, classes)
}

pub(crate) fn dixon_with_classes(g: &FiniteGroupModel, classes: ConjugacyClasses) -> Result<CharacterTable> {
    let r = classes.len();
    let order = g.order() as u64;
    let orders: Vec<u64> = classes.reps.iter().map(|&x| g.element_order(x) as u64).collect();
    let exponent = orders.iter().fold(1u64, |a, &o| a.lcm(&o));
    let p = choose_prime(exponent, order)?;

    // c[j][l][k] = #{x in C_j : x^{-1} z_k in C_l}, so K_j K_l = sum_k c[j][l][k] K_k.
    let mut c = vec![vec![vec![0u64; r]; r]; r];
    for x in 0..g.order() {
        let j = classes.class_of[x];
        let xi = g.inverse(x);
        for (k, &z) in classes.reps.iter().enumerate() {
            let y = g.mul(xi, z);
            c[j][classes.class_of[y]][k] += 1;
        }
    }

    let mut spaces = vec![Subspace::from_vectors(
        (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect(),
        p,
    )];
    for cj in c.iter().skip(1) {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let m: Vec<Vec<u64>> = cj.iter().map(|row| row.iter().map(|&v| v % p).collect()).collect();
        let mut next = Vec::new();
        for s in &spaces {
            if s.dim() == 1 {
                next.push(s.clone());
            } else {
                next.extend(split(s, &m, p)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(Error::Consistency(format!(
            "class algebra split into {} pieces, expected {r}",
            spaces.len()
        )));
    }

    let identity_class = classes.class_of[g.identity()];
    let inverse_class: Vec<usize> = classes.reps.iter().map(|&x| classes.class_of[g.inverse(x)]).collect();
    let sizes_inv: Vec<u64> = classes.sizes.iter().map(|&s| inv_mod(s as u64 % p, p)).collect();

    // Character values mod p on the class representatives.
    let mut modular: Vec<(u64, Vec<u64>)> = Vec::with_capacity(r);
    for s in &spaces {
        let v = &s.rows[0];
        let lead = v[identity_class];
        if lead == 0 {
            return Err(Error::Consistency("central character vanishes on the identity".into()));
        }
        let scale = inv_mod(lead, p);
        let omega: Vec<u64> = v.iter().map(|&x| x * scale % p).collect();
        let norm = (0..r).fold(0, |acc, k| {
            (acc + omega[k] * omega[inverse_class[k]] % p * sizes_inv[k]) % p
        });
        let deg_sq = order % p * inv_mod(norm, p) % p;
        let max_deg = (order as f64).sqrt().floor() as u64;
        let degree = (1..=max_deg)
            .find(|&d| d * d % p == deg_sq)
            .ok_or_else(|| Error::Consistency("no integral degree for a central character".into()))?;
        let values: Vec<u64> = (0..r)
            .map(|k| omega[k] * (degree % p) % p * sizes_inv[k] % p)
            .collect();
        modular.push((degree, values));
    }
    // Trivial character first, then by degree, then by the modular values.
    modular.sort_by(|a, b| {
        let triv = |m: &(u64, Vec<u64>)| !m.1.iter().all(|&v| v == 1);
        triv(a).cmp(&triv(b)).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
    });

    // Power maps: class of rep^e for e < element order.
    let power_classes: Vec<Vec<usize>> = classes
        .reps
        .iter()
        .zip(&orders)
        .map(|(&x, &o)| {
            let mut h = g.identity();
            (0..o)
                .map(|_| {
                    let cl = classes.class_of[h];
                    h = g.mul(h, x);
                    cl
                })
                .collect()
        })
        .collect();

    let z = root_of_unity(exponent, p);
    let mut values = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for (degree, chi) in &modular {
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = orders[k];
            let zo = pow_mod(z, exponent / o, p);
            let zo_inv = inv_mod(zo, p);
            let o_inv = inv_mod(o % p, p);
            let mut value = Complex64::new(0.0, 0.0);
            for l in 0..o {
                // multiplicity of the eigenvalue exp(2 pi i l / o)
                let step = pow_mod(zo_inv, l, p);
                let mut acc = 0u64;
                let mut twist = 1u64;
                for e in 0..o {
                    acc = (acc + chi[power_classes[k][e as usize]] * twist) % p;
                    twist = twist * step % p;
                }
                let mult = acc * o_inv % p;
                if mult > *degree {
                    return Err(Error::Consistency(format!(
                        "eigenvalue multiplicity {mult} exceeds degree {degree}"
                    )));
                }
                let angle = 2.0 * PI * l as f64 / o as f64;
                value += Complex64::from_polar(mult as f64, angle);
            }
            row.push(value);
        }
        values.push(row);
        degrees.push(*degree);
    }
    let names = (1..=r).map(|i| format!("X{i}")).collect();
    Ok(CharacterTable { classes, names, values, degrees, source: TableSource::Dixon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{parse_matrix, CoxeterMatrix, Order};
    use crate::repr::group::{realize_group, DEFAULT_ORDER_CAP};
    use crate::repr::table::dihedral_table;

    fn full(w: &CoxeterMatrix) -> FiniteGroupModel {
        realize_group(w, w.all_generators(), DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn prime_choice() {
        // H3: exponent 30, order 120.
        assert_eq!(choose_prime(30, 120).unwrap(), 31);
        assert_eq!(choose_prime(2, 2).unwrap(), 3);
        let p = choose_prime(60, 14_400).unwrap();
        assert!(p % 60 == 1 && p > 240 && is_prime(p));
    }

    #[test]
    fn c2_by_dixon() {
        let g = full(&parse_matrix(&[vec![1]]).unwrap());
        let t = dixon_table(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1]);
        t.validate().unwrap();
    }

    #[test]
    fn dihedral_agrees_with_closed_form() {
        for m in 3..=8 {
            let g = full(&parse_matrix(&[vec![1, m], vec![m, 1]]).unwrap());
            let d = dixon_table(&g).unwrap();
            let cf = dihedral_table(&g).unwrap();
            d.validate().unwrap();
            let mut a = d.degrees.clone();
            let mut b = cf.degrees.clone();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "m = {m}");
            assert_eq!(d.classes.sizes, cf.classes.sizes);
        }
    }

    #[test]
    fn a3_symmetric_group() {
        let w = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(3)), (1, 2, Order::Finite(3))])
            .unwrap();
        let t = dixon_table(&full(&w)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn h3_table() {
        let w = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(5)), (1, 2, Order::Finite(3))])
            .unwrap();
        let t = dixon_table(&full(&w)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.degrees, vec![1, 1, 3, 3, 3, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn b3_and_f4_tables() {
        let b3 = CoxeterMatrix::from_edges(3, &[(0, 1, Order::Finite(4)), (1, 2, Order::Finite(3))])
            .unwrap();
        let t = dixon_table(&full(&b3)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.len(), 10);
        let f4 = CoxeterMatrix::from_edges(
            4,
            &[(0, 1, Order::Finite(3)), (1, 2, Order::Finite(4)), (2, 3, Order::Finite(3))],
        )
        .unwrap();
        let t = dixon_table(&full(&f4)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.len(), 25);
    }
}
