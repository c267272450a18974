//! Good-measurement constructions on a system ⊗ environment split.
//!
//! A state |Ψ⟩ = Σᵢ φᵢ ⊗ χᵢ with orthonormal environment states χᵢ admits two
//! projectors tied to the experience index set I(E): one acting on the
//! environment (pointer) factor and one acting on the system factor. When the
//! φᵢ inside I(E) are orthogonal to those outside it, both induce the same
//! Process I reduction of |Ψ⟩⟨Ψ|.

use std::collections::BTreeSet;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{process_one, DensityState, Projector};
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, ComplexMatrix, CompositeSpace};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtComponent<T> {
    pub system: Vec<Complex<T>>,
    pub environment: Vec<Complex<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSystem<T> {
    system_dim: usize,
    environment_dim: usize,
    components: Vec<SchmidtComponent<T>>,
    experience: BTreeSet<usize>,
}

fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl<T: Real> SchmidtSystem<T> {
    pub fn new(
        system_dim: usize,
        environment_dim: usize,
        components: Vec<SchmidtComponent<T>>,
        experience: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        CompositeSpace::new(vec![system_dim, environment_dim])?;
        let experience: BTreeSet<usize> = experience.into_iter().collect();
        for (i, comp) in components.iter().enumerate() {
            if comp.system.len() != system_dim || comp.environment.len() != environment_dim {
                return Err(Error::Shape(format!("component {i} has wrong vector lengths")));
            }
        }
        if let Some(&index) = experience.iter().find(|&&i| i >= components.len()) {
            return Err(Error::Index {
                index,
                len: components.len(),
            });
        }
        let tol = T::validation_tol();
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate().skip(i) {
                let target = if i == j { T::one() } else { T::zero() };
                let overlap = inner(&a.environment, &b.environment);
                if (overlap - Complex::new(target, T::zero())).norm() > tol {
                    return Err(Error::Validation(format!(
                        "environment states {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        let sys = Self {
            system_dim,
            environment_dim,
            components,
            experience,
        };
        if sys.psi().iter().all(|z| z.norm_sqr() <= T::zero()) {
            return Err(Error::Degenerate("assembled state has zero norm".into()));
        }
        Ok(sys)
    }

    pub fn space(&self) -> CompositeSpace {
        CompositeSpace::new(vec![self.system_dim, self.environment_dim]).expect("validated in new")
    }

    pub fn components(&self) -> &[SchmidtComponent<T>] {
        &self.components
    }

    pub fn experience(&self) -> &BTreeSet<usize> {
        &self.experience
    }

    /// |Ψ⟩ = Σᵢ φᵢ ⊗ χᵢ, system factor first.
    pub fn psi(&self) -> Vec<Complex<T>> {
        let mut psi = vec![Complex::new(T::zero(), T::zero()); self.system_dim * self.environment_dim];
        for comp in &self.components {
            for (a, phi) in comp.system.iter().enumerate() {
                for (b, chi) in comp.environment.iter().enumerate() {
                    psi[a * self.environment_dim + b] += phi * chi;
                }
            }
        }
        psi
    }

    pub fn density(&self) -> Result<DensityState<T>> {
        DensityState::from_pure(self.space(), &self.psi())
    }

    /// Whether the system vectors inside I(E) are orthogonal to those outside it.
    pub fn is_good_measurement(&self) -> bool {
        let inside: Vec<_> = self
            .experience
            .iter()
            .map(|&i| self.components[i].system.clone())
            .collect();
        let basis = orthonormalize(&inside, T::validation_tol());
        let tol = T::validation_tol();
        (0..self.components.len())
            .filter(|i| !self.experience.contains(i))
            .all(|j| {
                let phi = &self.components[j].system;
                basis.iter().all(|b| inner(b, phi).norm() <= tol)
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodMeasurement<T> {
    /// P(E) = I_sys ⊗ Σ_{i∈I(E)} |χᵢ⟩⟨χᵢ|.
    pub experience: Projector<T>,
    /// (projector onto span{φᵢ : i ∈ I(E)}) ⊗ I_env.
    pub system: Projector<T>,
}

pub fn build_good_measurement<T: Real>(sys: &SchmidtSystem<T>) -> Result<GoodMeasurement<T>> {
    if sys.experience.is_empty() {
        return Err(Error::Validation("experience index set I(E) is empty".into()));
    }
    let env_space = CompositeSpace::single(sys.environment_dim)?;
    let sys_space = CompositeSpace::single(sys.system_dim)?;
    let pointers: Vec<_> = sys
        .experience
        .iter()
        .map(|&i| sys.components[i].environment.clone())
        .collect();
    let systems: Vec<_> = sys
        .experience
        .iter()
        .map(|&i| sys.components[i].system.clone())
        .collect();
    let pointer_proj = Projector::onto_span(env_space, &pointers)?;
    let system_proj = Projector::onto_span(sys_space, &systems)?;

    let experience = ComplexMatrix::identity(sys.system_dim).kron(pointer_proj.matrix())?;
    let system = system_proj
        .matrix()
        .kron(&ComplexMatrix::identity(sys.environment_dim))?;
    Ok(GoodMeasurement {
        experience: Projector::new(sys.space(), experience)?,
        system: Projector::new(sys.space(), system)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EquivalenceReport<T> {
    Applicable { max_deviation: T },
    Inapplicable,
}

/// ‖process_one(S, P(E)) − process_one(S, P_sys)‖_max for S = |Ψ⟩⟨Ψ|.
pub fn vn_equivalence_check<T: Real>(sys: &SchmidtSystem<T>) -> Result<EquivalenceReport<T>> {
    let gm = build_good_measurement(sys)?;
    if !sys.is_good_measurement() {
        return Ok(EquivalenceReport::Inapplicable);
    }
    let s = sys.density()?;
    let via_experience = process_one(&s, &gm.experience)?;
    let via_system = process_one(&s, &gm.system)?;
    Ok(EquivalenceReport::Applicable {
        max_deviation: via_experience.matrix().max_abs_diff(via_system.matrix())?,
    })
}
