//! Rest and boosted four-mass states K = P + V.
//!
//! A state carries a scalar-mass m (timelike eigenvalue structure, P·P = m²)
//! and a vector-mass k (spacelike, V·V = −|k|²) with P·V = 0. Boosting from
//! rest takes P = (γm, γmβ) and V = (β·Lk, Lk) with L the spatial boost
//! block. |k| may exceed m; such states have M² < 0 and stay constructible.

use crate::error::{Error, Result};
use crate::tetrad::{l_matrix, minkowski_dot, FourVector, ThreeVelocity};
use serde::{Deserialize, Serialize};

/// A particle at rest: scalar-mass m > 0 and vector-mass k.
/// The rest four-mass vector is {m, k}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestMassState {
    m: f64,
    k: [f64; 3],
}

impl RestMassState {
    pub fn new(m: f64, k: [f64; 3]) -> Result<Self> {
        if !m.is_finite() || !k.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite {
                context: "mass_states",
            });
        }
        if m <= 0.0 {
            return Err(Error::NonpositiveMass { m });
        }
        Ok(Self { m, k })
    }

    pub fn scalar_mass(&self) -> f64 {
        self.m
    }

    pub fn vector_mass(&self) -> [f64; 3] {
        self.k
    }

    /// |k|², the squared vector-mass magnitude m̃².
    pub fn vector_mass_sqr(&self) -> f64 {
        self.k.iter().map(|c| c * c).sum()
    }
}

/// A state boosted to velocity β, with derived E, P, V and K = P + V.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostedMassState {
    rest: RestMassState,
    beta: ThreeVelocity,
    energy: f64,
    p: FourVector,
    v: FourVector,
    k4: FourVector,
}

impl BoostedMassState {
    pub fn rest(&self) -> &RestMassState {
        &self.rest
    }

    pub fn beta(&self) -> &ThreeVelocity {
        &self.beta
    }

    /// E = γm.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Timelike eigenvalue four-vector P = (E, βE).
    pub fn p(&self) -> FourVector {
        self.p
    }

    /// Spacelike eigenvalue four-vector V = (β·Lk, Lk).
    pub fn v(&self) -> FourVector {
        self.v
    }

    /// The four-mass vector K = P + V.
    pub fn four_mass(&self) -> FourVector {
        self.k4
    }

    /// M² = m² − |k|², the generalized eigenvalue. Negative when |k| > m.
    pub fn m_squared(&self) -> f64 {
        self.rest.m * self.rest.m - self.rest.vector_mass_sqr()
    }
}

/// Boost a rest state to velocity β.
pub fn boost_state(rest: &RestMassState, beta: &ThreeVelocity) -> BoostedMassState {
    let gamma = beta.gamma();
    let energy = gamma * rest.m;
    let b = beta.components();
    let p = FourVector::from_parts(energy, [b[0] * energy, b[1] * energy, b[2] * energy]);
    let lk = l_matrix(beta).mul_vec(rest.k);
    let u = beta.dot3(lk);
    let v = FourVector::from_parts(u, lk);
    BoostedMassState {
        rest: *rest,
        beta: *beta,
        energy,
        p,
        v,
        k4: p + v,
    }
}

/// The Minkowski invariants of a boosted state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassShellReport {
    /// P·P, equal to m² on the mass shell.
    pub p2: f64,
    /// V·V, equal to −|k|².
    pub v2: f64,
    /// P·V, zero by orthogonality.
    pub pv: f64,
    /// m² from the rest-state input.
    pub m2: f64,
    /// m̃² = |k|² from the rest-state input.
    pub mtilde2: f64,
    /// The eigenvalue M² = p2 + v2 (= m² − m̃² up to rounding).
    pub m_squared: f64,
}

/// Evaluate P·P, V·V, P·V and M² for a boosted state.
pub fn mass_shell(state: &BoostedMassState) -> MassShellReport {
    let p = state.p();
    let v = state.v();
    let p2 = minkowski_dot(&p, &p);
    let v2 = minkowski_dot(&v, &v);
    let pv = minkowski_dot(&p, &v);
    MassShellReport {
        p2,
        v2,
        pv,
        m2: state.rest.m * state.rest.m,
        mtilde2: state.rest.vector_mass_sqr(),
        m_squared: p2 + v2,
    }
}

/// Declared causal class of a projection direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionClass {
    Timelike,
    Spacelike,
}

/// Projection of the four-mass vector onto a translation-generator
/// direction: direction·K under the metric contraction. The declared class
/// must agree with the sign of direction·direction.
pub fn generator_projection(
    state: &BoostedMassState,
    direction: &FourVector,
    class: DirectionClass,
) -> Result<f64> {
    let norm = direction.norm_sqr();
    let ok = match class {
        DirectionClass::Timelike => norm > 0.0,
        DirectionClass::Spacelike => norm < 0.0,
    };
    if !ok {
        return Err(Error::DirectionClassMismatch {
            declared: match class {
                DirectionClass::Timelike => "timelike",
                DirectionClass::Spacelike => "spacelike",
            },
            norm,
        });
    }
    Ok(minkowski_dot(direction, &state.four_mass()))
}

/// Serialized form of a state: only (m, k, β); every derived quantity is
/// recomputed on load, never trusted from the file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub m: f64,
    pub k: [f64; 3],
    pub beta: [f64; 3],
}

impl StateSpec {
    pub fn build(&self) -> Result<BoostedMassState> {
        let rest = RestMassState::new(self.m, self.k)?;
        let beta = ThreeVelocity::new(self.beta)?;
        Ok(boost_state(&rest, &beta))
    }
}

impl From<&BoostedMassState> for StateSpec {
    fn from(s: &BoostedMassState) -> Self {
        StateSpec {
            m: s.rest.scalar_mass(),
            k: s.rest.vector_mass(),
            beta: s.beta.components(),
        }
    }
}
