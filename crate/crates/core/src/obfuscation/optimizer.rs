//! Step-wise derivative-free minimizers.
//!
//! Each `step` receives the objective for that iteration only, which lets
//! the split loop swap the backend (and pruned circuit) between iterations
//! while every probe of one iteration stays on one backend.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// SPSA gain sequences `a_k = a / (k + 1 + A)^alpha`, `c_k = c / (k + 1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaGains {
    fn default() -> Self {
        SpsaGains {
            a: 0.3,
            c: 0.1,
            big_a: 5.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub x: Vec<f64>,
    pub value: f64,
}

pub trait StepOptimizer {
    /// Runs one iteration against `f` and returns every probe it evaluated.
    fn step<E>(&mut self, f: &mut dyn FnMut(&[f64]) -> Result<f64, E>) -> Result<Vec<Probe>, E>;

    fn current(&self) -> &[f64];
}

pub struct Spsa {
    x: Vec<f64>,
    k: usize,
    gains: SpsaGains,
    rng: ChaCha8Rng,
}

impl Spsa {
    pub fn new(x0: Vec<f64>, gains: SpsaGains, rng: ChaCha8Rng) -> Self {
        Spsa {
            x: x0,
            k: 0,
            gains,
            rng,
        }
    }
}

impl StepOptimizer for Spsa {
    fn step<E>(&mut self, f: &mut dyn FnMut(&[f64]) -> Result<f64, E>) -> Result<Vec<Probe>, E> {
        let g = &self.gains;
        let k = self.k as f64;
        let ak = g.a / (k + 1.0 + g.big_a).powf(g.alpha);
        let ck = g.c / (k + 1.0).powf(g.gamma);
        let delta: Vec<f64> = (0..self.x.len())
            .map(|_| if self.rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let plus: Vec<f64> = self.x.iter().zip(&delta).map(|(x, d)| x + ck * d).collect();
        let minus: Vec<f64> = self.x.iter().zip(&delta).map(|(x, d)| x - ck * d).collect();
        let f_plus = f(&plus)?;
        let f_minus = f(&minus)?;
        let diff = (f_plus - f_minus) / (2.0 * ck);
        for (x, d) in self.x.iter_mut().zip(&delta) {
            *x -= ak * diff / d;
        }
        self.k += 1;
        Ok(vec![
            Probe { x: plus, value: f_plus },
            Probe { x: minus, value: f_minus },
        ])
    }

    fn current(&self) -> &[f64] {
        &self.x
    }
}

/// Nelder-Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2).
pub struct NelderMead {
    simplex: Vec<Probe>,
    x0: Vec<f64>,
    step: f64,
}

impl NelderMead {
    pub fn new(x0: Vec<f64>, initial_step: f64) -> Self {
        NelderMead {
            simplex: Vec::new(),
            x0,
            step: initial_step,
        }
    }

    fn sort(&mut self) {
        self.simplex.sort_by(|a, b| a.value.total_cmp(&b.value));
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect()
}

impl StepOptimizer for NelderMead {
    fn step<E>(&mut self, f: &mut dyn FnMut(&[f64]) -> Result<f64, E>) -> Result<Vec<Probe>, E> {
        let mut probes = Vec::new();
        let mut eval = |x: Vec<f64>, probes: &mut Vec<Probe>| -> Result<f64, E> {
            let value = f(&x)?;
            probes.push(Probe { x, value });
            Ok(value)
        };

        if self.simplex.is_empty() {
            let d = self.x0.len();
            for i in 0..=d {
                let mut x = self.x0.clone();
                if i > 0 {
                    x[i - 1] += self.step;
                }
                let value = eval(x.clone(), &mut probes)?;
                self.simplex.push(Probe { x, value });
            }
            self.sort();
        }

        let d = self.simplex.len() - 1;
        let centroid: Vec<f64> = (0..d)
            .map(|j| self.simplex[..d].iter().map(|p| p.x[j]).sum::<f64>() / d as f64)
            .collect();
        let best = self.simplex[0].value;
        let second_worst = self.simplex[d - 1].value;
        let worst = self.simplex[d].clone();

        let reflected = lerp(&centroid, &worst.x, -1.0);
        let fr = eval(reflected.clone(), &mut probes)?;
        if fr < best {
            let expanded = lerp(&centroid, &worst.x, -2.0);
            let fe = eval(expanded.clone(), &mut probes)?;
            self.simplex[d] = if fe < fr {
                Probe { x: expanded, value: fe }
            } else {
                Probe { x: reflected, value: fr }
            };
        } else if fr < second_worst {
            self.simplex[d] = Probe { x: reflected, value: fr };
        } else {
            let (target, ft) = if fr < worst.value {
                (lerp(&centroid, &reflected, 0.5), fr)
            } else {
                (lerp(&centroid, &worst.x, 0.5), worst.value)
            };
            let fc = eval(target.clone(), &mut probes)?;
            if fc < ft {
                self.simplex[d] = Probe { x: target, value: fc };
            } else {
                let anchor = self.simplex[0].x.clone();
                for i in 1..=d {
                    let x = lerp(&anchor, &self.simplex[i].x, 0.5);
                    let value = eval(x.clone(), &mut probes)?;
                    self.simplex[i] = Probe { x, value };
                }
            }
        }
        self.sort();
        Ok(probes)
    }

    fn current(&self) -> &[f64] {
        self.simplex.first().map_or(&self.x0, |p| &p.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::convert::Infallible;

    fn bowl(x: &[f64]) -> Result<f64, Infallible> {
        Ok((x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2))
    }

    #[test]
    fn spsa_descends_a_quadratic() {
        let gains = SpsaGains {
            a: 0.5,
            c: 0.1,
            ..SpsaGains::default()
        };
        let mut opt = Spsa::new(vec![0.0, 0.0], gains, ChaCha8Rng::seed_from_u64(3));
        for _ in 0..300 {
            let probes = opt.step(&mut bowl).unwrap();
            assert_eq!(probes.len(), 2);
        }
        let x = opt.current();
        assert!((x[0] - 1.0).abs() < 0.05 && (x[1] + 0.5).abs() < 0.05, "{x:?}");
    }

    #[test]
    fn nelder_mead_descends_a_quadratic() {
        let mut opt = NelderMead::new(vec![0.0, 0.0], 0.5);
        let first = opt.step(&mut bowl).unwrap();
        assert!(first.len() >= 4);
        for _ in 0..100 {
            opt.step(&mut bowl).unwrap();
        }
        let x = opt.current();
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] + 0.5).abs() < 1e-4, "{x:?}");
    }

    #[test]
    fn errors_propagate() {
        let mut opt = NelderMead::new(vec![0.0], 0.5);
        let mut failing = |_: &[f64]| -> Result<f64, &'static str> { Err("boom") };
        assert_eq!(opt.step(&mut failing), Err("boom"));
    }
}
