//! Bredon homology of Coxeter groups with coefficients in the complex
//! representation ring, and the equivariant K-homology it determines.
//!
//! Two independent routes are provided:
//!
//! * the chain route builds the quotient of the Davis complex as chains of
//!   spherical subsets, realizes every finite special subgroup, computes
//!   its character table and the induction maps between them, and takes
//!   homology with Smith normal forms;
//! * the closed-form route evaluates the formulas for right-angled, even,
//!   low-rank and finite Coxeter groups, and the Künneth formula for products.
//!
//! ```
//! use bredon_core::{chain_homology, coxeter::parse_matrix, repr::DEFAULT_ORDER_CAP};
//!
//! let d_inf = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
//! let h = chain_homology(&d_inf, DEFAULT_ORDER_CAP, None).unwrap();
//! assert_eq!(h.get(0).free_rank, 3);
//! ```

pub mod closed_form;
pub mod coxeter;
pub mod davis;
pub mod error;
pub mod homology;
pub mod report;
pub mod repr;

pub use closed_form::{k_homology, HomologyProfile, KHomology, Method};
pub use coxeter::{CoxeterMatrix, GeneratorSubset, SphericalPoset};
pub use error::{Error, Result};
pub use homology::FgAbGroup;

use coxeter::enumerate_spherical;
use davis::{bredon_complex, relative_complex, BredonChainComplex};
use repr::RepresentationRings;

/// Everything the chain route computes for one Coxeter system.
#[derive(Clone, Debug)]
pub struct ChainComputation {
    pub poset: SphericalPoset,
    pub rings: RepresentationRings,
    pub complex: BredonChainComplex,
}

impl ChainComputation {
    pub fn run(w: &CoxeterMatrix, cap: u128) -> Result<Self> {
        let poset = enumerate_spherical(w);
        let rings = RepresentationRings::build(w, &poset, cap)?;
        let complex = bredon_complex(&poset, &rings)?;
        Ok(Self { poset, rings, complex })
    }

    /// Homology up to `max_degree` (default: the rank).
    pub fn profile(&self, max_degree: Option<usize>) -> Result<HomologyProfile> {
        let top = max_degree.unwrap_or(self.poset.rank);
        let mut out = HomologyProfile::new(Method::Chain, "Davis complex");
        for (d, g) in self.complex.homology_profile(top)? {
            out.set(d, g);
        }
        Ok(out)
    }

    /// Homology of each skeleton pair `(Σ_n, Σ_{n-1})` against the direct sum,
    /// over spherical `T` of rank `n`, of the top pair of the sub-system `W_T`.
    pub fn check_skeleton_decomposition(&self, w: &CoxeterMatrix, cap: u128) -> Result<()> {
        let pairs = |cx: &BredonChainComplex, n: usize| -> Result<Vec<FgAbGroup>> {
            let rel = relative_complex(cx, n);
            (0..=n).map(|d| rel.homology(d)).collect()
        };
        for (n, layer) in self.poset.by_rank.iter().enumerate() {
            let lhs = pairs(&self.complex, n)?;
            let mut rhs = vec![FgAbGroup::zero(); n + 1];
            for &t in layer {
                let sub = ChainComputation::run(&w.restrict(t), cap)?;
                for (acc, g) in rhs.iter_mut().zip(pairs(&sub.complex, n)?) {
                    *acc = acc.direct_sum(&g);
                }
            }
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "skeleton pair {n}: {lhs:?} differs from the sum over cells {rhs:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Bredon homology through the Davis chain complex.
pub fn chain_homology(w: &CoxeterMatrix, cap: u128, max_degree: Option<usize>) -> Result<HomologyProfile> {
    ChainComputation::run(w, cap)?.profile(max_degree)
}
