use num_complex::Complex64;

use super::SimError;
use crate::circuit::{Circuit, Gate};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

/// Pauli error inserted by the trajectory noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Dense amplitudes; bit `q` of a basis index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        if num_qubits > MAX_QUBITS {
            return Err(SimError::Capacity {
                qubits: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a 2x2 unitary `[[m00, m01], [m10, m11]]` to qubit `q`.
    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        let zero = Complex64::new(0.0, 0.0);
        match *gate {
            Gate::H(q) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q, [[h, h], [h, -h]]);
            }
            Gate::Rx(q, theta) => {
                let c = Complex64::new((theta / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(theta / 2.0).sin());
                self.apply_1q(q, [[c, s], [s, c]]);
            }
            Gate::Rz(q, theta) => {
                let m = Complex64::from_polar(1.0, -theta / 2.0);
                let p = Complex64::from_polar(1.0, theta / 2.0);
                self.apply_1q(q, [[m, zero], [zero, p]]);
            }
            Gate::Cx(c, t) => {
                let (cm, tm) = (1usize << c, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::MeasureAll => {}
        }
    }

    pub fn apply_pauli(&mut self, q: usize, pauli: Pauli) {
        let mask = 1usize << q;
        match pauli {
            Pauli::X => {
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Pauli::Y => {
                let i_unit = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let j = i | mask;
                        let (a, b) = (self.amps[i], self.amps[j]);
                        self.amps[i] = -i_unit * b;
                        self.amps[j] = i_unit * a;
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }
}

/// Noiseless evolution of `|0...0>` through every gate of `c`; the final
/// measurement is a no-op here.
pub fn run_statevector(c: &Circuit) -> Result<StateVector, SimError> {
    let mut sv = StateVector::zero(c.num_qubits())?;
    for g in c.gates() {
        sv.apply(g);
    }
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_qaoa, ParamVector};
    use crate::graph::Graph;
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-12;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < TOL && (a.im - im).abs() < TOL
    }

    #[test]
    fn hadamard_on_one_qubit() {
        let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        let sv = run_statevector(&c).unwrap();
        assert!(close(sv.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(sv.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn bell_state() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cx(0, 1)]).unwrap();
        let a = run_statevector(&c).unwrap();
        let a = a.amplitudes();
        assert!(close(a[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(a[3], FRAC_1_SQRT_2, 0.0));
        assert!(close(a[1], 0.0, 0.0) && close(a[2], 0.0, 0.0));
    }

    #[test]
    fn zero_angle_qaoa_is_uniform() {
        let pv = ParamVector::new(vec![0.0], vec![0.0]).unwrap();
        let c = build_qaoa(&Graph::cycle(4).unwrap(), &pv).unwrap();
        let sv = run_statevector(&c).unwrap();
        for p in sv.probabilities() {
            assert!((p - 1.0 / 16.0).abs() < TOL);
        }
    }

    #[test]
    fn rotations_match_closed_forms() {
        // RX(pi) |0> = -i |1>; RZ(t) |+> has relative phase e^{it}
        let c = Circuit::from_gates(1, vec![Gate::Rx(0, std::f64::consts::PI)]).unwrap();
        let sv = run_statevector(&c).unwrap();
        assert!(close(sv.amplitudes()[1], 0.0, -1.0));
        let t = 0.7;
        let c = Circuit::from_gates(1, vec![Gate::H(0), Gate::Rz(0, t)]).unwrap();
        let a = run_statevector(&c).unwrap();
        let ratio = a.amplitudes()[1] / a.amplitudes()[0];
        assert!(close(ratio, t.cos(), t.sin()));
    }

    #[test]
    fn zz_block_phases_by_parity() {
        // CX RZ(2g) CX on |+>|+> gives phase e^{-ig} for even parity, e^{ig} for odd
        let g = 0.37;
        let c = Circuit::from_gates(
            2,
            vec![Gate::H(0), Gate::H(1), Gate::Cx(0, 1), Gate::Rz(1, 2.0 * g), Gate::Cx(0, 1)],
        )
        .unwrap();
        let a = run_statevector(&c).unwrap();
        let a = a.amplitudes();
        for (idx, sign) in [(0usize, -1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
            assert!(close(a[idx], 0.5 * (sign * g).cos(), 0.5 * (sign * g).sin()));
        }
    }

    #[test]
    fn paulis_act_as_expected() {
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply_pauli(0, Pauli::X);
        assert!(close(sv.amplitudes()[1], 1.0, 0.0));
        sv.apply_pauli(0, Pauli::Z);
        assert!(close(sv.amplitudes()[1], -1.0, 0.0));
        sv.apply_pauli(0, Pauli::Y);
        // Y|1> = -i|0>, so Y(-|1>) = i|0>
        assert!(close(sv.amplitudes()[0], 0.0, 1.0));
    }

    #[test]
    fn norm_preserved_gate_by_gate() {
        let pv = ParamVector::new(vec![0.4, 1.1], vec![0.9, 0.2]).unwrap();
        let c = build_qaoa(&Graph::complete(5).unwrap(), &pv).unwrap();
        let mut sv = StateVector::zero(5).unwrap();
        for g in c.gates() {
            sv.apply(g);
            assert!((sv.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn capacity_guard() {
        let c = Circuit::new(MAX_QUBITS + 1);
        assert!(matches!(run_statevector(&c), Err(SimError::Capacity { .. })));
    }
}
