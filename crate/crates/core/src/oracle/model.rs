//! Operator construction for the truncated driven Tavis–Cummings model.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{DriveSpec, SystemRates};

pub const MAX_FOCK: usize = 12;
pub const MAX_ATOMS: u32 = 4;
pub const MAX_DIM: usize = 512;

type CMatrix = DMatrix<Complex64>;

/// One dissipation channel: the rate r multiplies the half-form
/// dissipator r·(2AρA† − A†Aρ − ρA†A).
///
/// With that normalization the cavity channel is (κ, a) — photon number
/// decays at 2κ — and each atomic channel is (γ/2, σᵢ⁻) — population
/// relaxes at γ and the coherence at γ/2.
#[derive(Debug, Clone)]
pub struct CollapseOp {
    pub rate: f64,
    pub op: CMatrix,
    op_dag: CMatrix,
    op_dag_op: CMatrix,
}

impl CollapseOp {
    fn new(rate: f64, op: CMatrix) -> Self {
        let op_dag = op.adjoint();
        let op_dag_op = &op_dag * &op;
        Self { rate, op, op_dag, op_dag_op }
    }

    /// A†, cached.
    pub fn op_dag(&self) -> &CMatrix {
        &self.op_dag
    }

    /// A†A, cached.
    pub fn op_dag_op(&self) -> &CMatrix {
        &self.op_dag_op
    }
}

/// Truncated Hilbert-space model: operators, Hamiltonian and collapse
/// channels for N two-level atoms in a driven cavity.
///
/// Basis ordering is cavity ⊗ atom₁ ⊗ … ⊗ atom_N with Fock index
/// 0..=n_max on the cavity slot and (|g⟩, |e⟩) on each atom slot.
/// The Hamiltonian is written in the frame rotating at the drive:
///
/// ```text
/// H = −Ω(a†a + Σᵢσᵢ⁺σᵢ⁻) + g Σᵢ(a†σᵢ⁻ + a σᵢ⁺) + ε(a + a†)
/// ```
///
/// with ω_a = ω_c so the single detuning Ω covers both resonances.
#[derive(Debug, Clone)]
pub struct QuantumModel {
    rates: SystemRates,
    drive: DriveSpec,
    n_max: usize,
    dim: usize,
    hamiltonian: CMatrix,
    collapse_ops: Vec<CollapseOp>,
    /// K = −iH − Σᵢ rᵢAᵢ†Aᵢ, so that L(ρ) = Kρ + ρK† + Σᵢ 2rᵢAᵢρAᵢ†.
    effective_drift: CMatrix,
    effective_drift_dag: CMatrix,
    annihilation: CMatrix,
    lowering: Vec<CMatrix>,
    collective_lowering: CMatrix,
}

impl QuantumModel {
    /// Build all operators for the given rates, drive and Fock cutoff.
    /// The atom number comes from `rates`; at most [`MAX_ATOMS`] atoms and
    /// [`MAX_FOCK`] photons are supported, and the total dimension
    /// (n_max+1)·2^N is capped at [`MAX_DIM`].
    pub fn build(rates: &SystemRates, drive: &DriveSpec, n_max: usize) -> Result<Self> {
        if !(1..=MAX_FOCK).contains(&n_max) {
            return Err(Error::FockCutoff { n_max });
        }
        let n_atoms = rates.n_atoms();
        if n_atoms > MAX_ATOMS {
            return Err(Error::AtomCount { n_atoms });
        }
        let n_atoms = n_atoms as usize;
        let dim = (n_max + 1) * (1usize << n_atoms);
        if dim > MAX_DIM {
            return Err(Error::DimensionLimit { dim, max: MAX_DIM });
        }

        let cavity_dim = n_max + 1;
        let mut ladder = CMatrix::zeros(cavity_dim, cavity_dim);
        for n in 1..cavity_dim {
            ladder[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        // |g⟩⟨e| on one atom slot, index 0 = ground.
        let mut drop1 = CMatrix::zeros(2, 2);
        drop1[(0, 1)] = Complex64::new(1.0, 0.0);

        let annihilation = embed(&ladder, None, n_atoms);
        let lowering: Vec<CMatrix> = (0..n_atoms)
            .map(|i| embed(&CMatrix::identity(cavity_dim, cavity_dim), Some((i, &drop1)), n_atoms))
            .collect();

        let creation = annihilation.adjoint();
        let mut hamiltonian = scale(&(&creation * &annihilation), -drive.omega());
        for sm in &lowering {
            let sp = sm.adjoint();
            hamiltonian += scale(&(&sp * sm), -drive.omega());
            hamiltonian += scale(&(&creation * sm + &annihilation * &sp), rates.g());
        }
        hamiltonian += scale(&(&annihilation + &creation), drive.epsilon());

        let mut collapse_ops = Vec::with_capacity(1 + n_atoms);
        collapse_ops.push(CollapseOp::new(rates.kappa(), annihilation.clone()));
        for sm in &lowering {
            collapse_ops.push(CollapseOp::new(0.5 * rates.gamma(), sm.clone()));
        }

        let mut collective_lowering = CMatrix::zeros(dim, dim);
        for sm in &lowering {
            collective_lowering += sm;
        }

        let mut effective_drift = &hamiltonian * Complex64::new(0.0, -1.0);
        for ch in &collapse_ops {
            effective_drift -= ch.op_dag_op() * Complex64::new(ch.rate, 0.0);
        }
        let effective_drift_dag = effective_drift.adjoint();

        Ok(Self {
            rates: *rates,
            drive: *drive,
            n_max,
            dim,
            hamiltonian,
            collapse_ops,
            effective_drift,
            effective_drift_dag,
            annihilation,
            lowering,
            collective_lowering,
        })
    }

    pub fn rates(&self) -> &SystemRates {
        &self.rates
    }

    pub fn drive(&self) -> &DriveSpec {
        &self.drive
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn n_atoms(&self) -> usize {
        self.rates.n_atoms() as usize
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn collapse_ops(&self) -> &[CollapseOp] {
        &self.collapse_ops
    }

    /// Non-Hermitian drift K = −iH − Σᵢ rᵢAᵢ†Aᵢ of the master equation.
    pub fn effective_drift(&self) -> &CMatrix {
        &self.effective_drift
    }

    /// K†, cached.
    pub fn effective_drift_dag(&self) -> &CMatrix {
        &self.effective_drift_dag
    }

    /// Cavity mode operator a.
    pub fn annihilation(&self) -> &CMatrix {
        &self.annihilation
    }

    /// σᵢ⁻ for one atom.
    pub fn lowering(&self, atom: usize) -> &CMatrix {
        &self.lowering[atom]
    }

    /// Collective Σᵢσᵢ⁻.
    pub fn collective_lowering(&self) -> &CMatrix {
        &self.collective_lowering
    }

    /// σᵢᶻ = σᵢ⁺σᵢ⁻ − σᵢ⁻σᵢ⁺ for one atom.
    pub fn inversion_op(&self, atom: usize) -> CMatrix {
        let sm = &self.lowering[atom];
        let sp = sm.adjoint();
        &sp * sm - sm * &sp
    }

    /// Vacuum density matrix (no photons, all atoms in the ground state).
    pub fn vacuum(&self) -> CMatrix {
        let mut rho = CMatrix::zeros(self.dim, self.dim);
        rho[(0, 0)] = Complex64::new(1.0, 0.0);
        rho
    }
}

fn scale(m: &CMatrix, s: f64) -> CMatrix {
    m * Complex64::new(s, 0.0)
}

/// Tensor-embed a cavity operator and at most one single-atom operator
/// into the full cavity ⊗ atoms product space.
fn embed(cavity_op: &CMatrix, atom_op: Option<(usize, &CMatrix)>, n_atoms: usize) -> CMatrix {
    let identity2 = CMatrix::identity(2, 2);
    let mut full = cavity_op.clone();
    for slot in 0..n_atoms {
        let factor = match atom_op {
            Some((target, op)) if target == slot => op,
            _ => &identity2,
        };
        full = full.kronecker(factor);
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn apparatus(n: u32) -> SystemRates {
        SystemRates::from_linear_mhz(2.0, 2.6, 6.0, n).unwrap()
    }

    #[test]
    fn dimensions_and_limits() {
        let drive = DriveSpec::new(0.1, 0.0).unwrap();
        let m = QuantumModel::build(&apparatus(1), &drive, 2).unwrap();
        assert_eq!(m.dim(), 6);
        let m = QuantumModel::build(&apparatus(2), &drive, 3).unwrap();
        assert_eq!(m.dim(), 16);
        assert!(matches!(
            QuantumModel::build(&apparatus(1), &drive, 0),
            Err(Error::FockCutoff { n_max: 0 })
        ));
        assert!(matches!(
            QuantumModel::build(&apparatus(1), &drive, 13),
            Err(Error::FockCutoff { .. })
        ));
        assert!(matches!(
            QuantumModel::build(&apparatus(5), &drive, 2),
            Err(Error::AtomCount { n_atoms: 5 })
        ));
    }

    #[test]
    fn annihilation_structure() {
        // a acts on the Fock superdiagonal within each atom block.
        let drive = DriveSpec::new(0.0, 0.0).unwrap();
        let m = QuantumModel::build(&apparatus(1), &drive, 2).unwrap();
        let a = m.annihilation();
        for i in 0..6 {
            for j in 0..6 {
                let (ni, si) = (i / 2, i % 2);
                let (nj, sj) = (j / 2, j % 2);
                let expected = if si == sj && nj == ni + 1 {
                    (nj as f64).sqrt()
                } else {
                    0.0
                };
                assert_relative_eq!(a[(i, j)].re, expected, epsilon = 1e-15);
                assert_eq!(a[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn commutator_identity_below_cutoff() {
        let drive = DriveSpec::new(0.0, 0.0).unwrap();
        let m = QuantumModel::build(&apparatus(1), &drive, 4).unwrap();
        let a = m.annihilation();
        let comm = a * a.adjoint() - a.adjoint() * a;
        // [a, a†] = 1 except on the truncated top Fock level.
        let top_block = m.dim() - 2;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let expected = if i == j {
                    if i < top_block {
                        1.0
                    } else {
                        -(m.n_max() as f64)
                    }
                } else {
                    0.0
                };
                assert_relative_eq!(comm[(i, j)].re, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_is_hermitian_and_local_in_fock() {
        let drive = DriveSpec::new(2.0, 5.0).unwrap();
        let m = QuantumModel::build(&apparatus(2), &drive, 3).unwrap();
        let h = m.hamiltonian();
        let dev = (h - h.adjoint()).camax();
        let scale = h.camax();
        assert!(dev <= 1e-12 * scale, "hermiticity deviation {dev}");
        // The drive couples Fock neighbors only: total-excitation blocks can
        // differ by at most one photon.
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let ni = i / 4;
                let nj = j / 4;
                if (ni as isize - nj as isize).abs() > 1 {
                    assert_eq!(h[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn collapse_channel_rates() {
        let rates = apparatus(3);
        let drive = DriveSpec::new(0.1, 0.0).unwrap();
        let m = QuantumModel::build(&rates, &drive, 2).unwrap();
        assert_eq!(m.collapse_ops().len(), 4);
        assert_eq!(m.collapse_ops()[0].rate, rates.kappa());
        for ch in &m.collapse_ops()[1..] {
            assert_eq!(ch.rate, 0.5 * rates.gamma());
        }
    }
}
