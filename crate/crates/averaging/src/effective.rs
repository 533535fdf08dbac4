//! Second-order effective Hamiltonian and generator of the averaged dynamics.

use num_complex::Complex;
use qcr_spaces::scalar::{cr, expi, lit};
use qcr_spaces::{OperatorMatrix, Real};

use crate::error::AveragingError;
use crate::filter::{classify_frequency, FilterSpec, Verdict};
use crate::harmonic::{Domain, HarmonicHamiltonian};

/// Differences below this fraction of the largest frequency count as resonant.
pub const RESONANCE_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combination {
    Sum,
    Difference,
}

/// ½(1/f1 ± 1/f2)
pub fn inverse_detuning_sum<T: Real>(f1: T, f2: T, sign: Combination) -> Result<T, AveragingError> {
    if f1.is_zero() || f2.is_zero() {
        return Err(AveragingError::SingularDetuning(format!(
            "zero frequency in inverse detuning sum ({}, {})",
            qcr_spaces::scalar::to_f64(f1),
            qcr_spaces::scalar::to_f64(f2)
        )));
    }
    let half: T = lit(0.5);
    Ok(match sign {
        Combination::Sum => half * (T::one() / f1 + T::one() / f2),
        Combination::Difference => half * (T::one() / f1 - T::one() / f2),
    })
}

/// A kept pair (n, m) with [x_m†, x_n] and its weights.
#[derive(Clone, Debug)]
pub struct KeptPair<T: Real> {
    pub domain: Domain,
    pub n: usize,
    pub m: usize,
    /// 1/ω⁽⁺⁾_{nm}
    pub inv_plus: T,
    /// 1/ω⁽⁻⁾_{nm}, zero for resonant pairs
    pub inv_minus: T,
    /// ω_m − ω_n, zero for resonant pairs
    pub residual: T,
}

/// Pairs that survive the low-pass filter; only intra-domain differences can.
pub fn kept_pairs<T: Real>(
    h: &HarmonicHamiltonian<T>,
    filter: &FilterSpec<T>,
) -> Result<Vec<KeptPair<T>>, AveragingError> {
    let scale = h.max_frequency();
    let mut out = Vec::new();
    for domain in [Domain::Slow, Domain::Fast] {
        let terms = h.terms(domain);
        for (n, tn) in terms.iter().enumerate() {
            for (m, tm) in terms.iter().enumerate() {
                let diff = tm.frequency - tn.frequency;
                if classify_frequency(diff, filter) == Verdict::Drop {
                    continue;
                }
                let resonant = n == m || diff.abs() < lit::<T>(RESONANCE_RTOL) * scale;
                let inv_plus = inverse_detuning_sum(tn.frequency, tm.frequency, Combination::Sum)?;
                let (inv_minus, residual) = if resonant {
                    (T::zero(), T::zero())
                } else {
                    (inverse_detuning_sum(tn.frequency, tm.frequency, Combination::Difference)?, diff)
                };
                out.push(KeptPair { domain, n, m, inv_plus, inv_minus, residual });
            }
        }
    }
    Ok(out)
}

/// Precomputed commutators for evaluating H_eff at many times.
#[derive(Clone, Debug)]
pub struct EffectiveTerms<T: Real> {
    h0: OperatorMatrix<T>,
    sign: T,
    terms: Vec<(KeptPair<T>, OperatorMatrix<T>)>,
}

impl<T: Real> EffectiveTerms<T> {
    pub fn new(h: &HarmonicHamiltonian<T>, filter: &FilterSpec<T>) -> Result<Self, AveragingError> {
        let pairs = kept_pairs(h, filter)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for p in pairs {
            let ops = h.terms(p.domain);
            let comm = ops[p.m].op.adjoint().commutator(&ops[p.n].op);
            terms.push((p, comm));
        }
        Ok(Self { h0: h.h0.clone(), sign: h.hc_sign.value(), terms })
    }

    pub fn pairs(&self) -> impl Iterator<Item = &KeptPair<T>> {
        self.terms.iter().map(|(p, _)| p)
    }

    /// H0 ± Σ [x_m†, x_n]/ω⁽⁺⁾ e^{i(ω_m−ω_n)t}
    pub fn at(&self, t: T) -> OperatorMatrix<T> {
        let mut m = self.h0.matrix().clone();
        for (p, comm) in &self.terms {
            let w: Complex<T> = expi(p.residual * t) * cr(p.inv_plus * self.sign);
            m += comm.matrix().map(|z| z * w);
        }
        OperatorMatrix::new(m)
    }
}

/// H_eff(t) for the kept combinations.
pub fn effective_hamiltonian<T: Real>(
    h: &HarmonicHamiltonian<T>,
    filter: &FilterSpec<T>,
    t: T,
) -> Result<OperatorMatrix<T>, AveragingError> {
    Ok(EffectiveTerms::new(h, filter)?.at(t))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTerm<T: Real> {
    pub domain: Domain,
    pub m: usize,
    pub n: usize,
    /// ± 1/ω⁽⁻⁾_{nm}
    pub coefficient: T,
    pub residual: T,
}

/// H_eff(0) together with the anticommutator and dissipator term lists.
#[derive(Clone, Debug)]
pub struct SecondOrderGenerator<T: Real> {
    pub h_eff: OperatorMatrix<T>,
    pub anticommutator_terms: Vec<GeneratorTerm<T>>,
    pub dissipator_terms: Vec<GeneratorTerm<T>>,
    effective: EffectiveTerms<T>,
    slow: Vec<OperatorMatrix<T>>,
    fast: Vec<OperatorMatrix<T>>,
}

pub fn second_order_generator<T: Real>(
    h: &HarmonicHamiltonian<T>,
    filter: &FilterSpec<T>,
) -> Result<SecondOrderGenerator<T>, AveragingError> {
    let effective = EffectiveTerms::new(h, filter)?;
    let sign: T = h.hc_sign.value();
    let mut anti = Vec::new();
    for p in effective.pairs() {
        if p.inv_minus.is_zero() {
            continue;
        }
        anti.push(GeneratorTerm {
            domain: p.domain,
            m: p.m,
            n: p.n,
            coefficient: sign * p.inv_minus,
            residual: p.residual,
        });
    }
    let dissipator_terms = anti
        .iter()
        .map(|g| GeneratorTerm { coefficient: -g.coefficient * lit(2.0), ..g.clone() })
        .collect();
    Ok(SecondOrderGenerator {
        h_eff: effective.at(T::zero()),
        anticommutator_terms: anti,
        dissipator_terms,
        effective,
        slow: h.slow.iter().map(|t| t.op.clone()).collect(),
        fast: h.fast.iter().map(|t| t.op.clone()).collect(),
    })
}

impl<T: Real> SecondOrderGenerator<T> {
    fn ops(&self, d: Domain) -> &[OperatorMatrix<T>] {
        match d {
            Domain::Slow => &self.slow,
            Domain::Fast => &self.fast,
        }
    }

    /// Right-hand side F with i dŌ/dt = F(Ō, t).
    pub fn rhs(&self, o: &OperatorMatrix<T>, t: T) -> OperatorMatrix<T> {
        let h = self.effective.at(t);
        let mut acc = -&h.commutator(o);
        for g in &self.anticommutator_terms {
            let ops = self.ops(g.domain);
            let (xm, xn) = (&ops[g.m], &ops[g.n]);
            let inner = xm.adjoint().anticommutator(xn);
            let w = expi(g.residual * t) * cr(g.coefficient);
            acc += &inner.anticommutator(o).scale(w);
        }
        for g in &self.dissipator_terms {
            let ops = self.ops(g.domain);
            let (xm, xn) = (&ops[g.m], &ops[g.n]);
            let xmd = xm.adjoint();
            let sandwich = &(&(&xmd * o) * xn) + &(&(xn * o) * &xmd);
            let w = expi(g.residual * t) * cr(g.coefficient);
            acc += &sandwich.scale(w);
        }
        acc
    }

    /// Diagnostic fixed-step RK4 propagation of an operator under the full generator.
    pub fn propagate(&self, o0: &OperatorMatrix<T>, t_end: T, steps: usize) -> OperatorMatrix<T> {
        let dt = t_end / lit(steps.max(1) as f64);
        let minus_i = Complex::new(T::zero(), -T::one());
        let half: T = lit(0.5);
        let f = |o: &OperatorMatrix<T>, t: T| self.rhs(o, t).scale(minus_i);
        let mut o = o0.clone();
        let mut t = T::zero();
        for _ in 0..steps.max(1) {
            let k1 = f(&o, t);
            let k2 = f(&(&o + &k1.scale_re(dt * half)), t + dt * half);
            let k3 = f(&(&o + &k2.scale_re(dt * half)), t + dt * half);
            let k4 = f(&(&o + &k3.scale_re(dt)), t + dt);
            let incr = &(&(&k1 + &k2.scale_re(lit(2.0))) + &k3.scale_re(lit(2.0))) + &k4;
            o = &o + &incr.scale_re(dt / lit(6.0));
            t += dt;
        }
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{HcSign, OscillatingTerm};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn sigma_minus() -> OperatorMatrix<f64> {
        // basis (ground, excited)
        OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]))
    }

    #[test]
    fn inverse_sums() {
        assert_eq!(inverse_detuning_sum(-5.0, -5.0, Combination::Sum).unwrap(), -0.2);
        assert_eq!(inverse_detuning_sum(10.0, -10.0, Combination::Sum).unwrap(), 0.0);
        assert!((inverse_detuning_sum::<f64>(4.0, 6.0, Combination::Sum).unwrap() - 5.0 / 24.0).abs() < 1e-16);
        assert!(matches!(
            inverse_detuning_sum(0.0, 1.0, Combination::Sum),
            Err(AveragingError::SingularDetuning(_))
        ));
    }

    #[test]
    fn no_terms_gives_h0() {
        let h0 = OperatorMatrix::from_real_diagonal(&[0.3, -1.0]);
        let h = HarmonicHamiltonian::new(h0.clone(), vec![], vec![], HcSign::Hermitian).unwrap();
        let f = FilterSpec::gaussian(1.0).unwrap();
        assert_eq!(effective_hamiltonian(&h, &f, 2.0).unwrap(), h0);
    }

    #[test]
    fn two_level_toy() {
        // [σ₊, σ₋] = diag(−1, +1) in (ground, excited) ordering
        let (g, delta) = (0.1, 4.0);
        for sign in [HcSign::Hermitian, HcSign::Literal] {
            let h = HarmonicHamiltonian::new(
                OperatorMatrix::zeros(2),
                vec![OscillatingTerm::new(sigma_minus().scale_re(g), delta, "h")],
                vec![],
                sign,
            )
            .unwrap();
            let f = FilterSpec::gaussian(1.0).unwrap();
            let heff = effective_hamiltonian(&h, &f, 0.0).unwrap();
            let s: f64 = sign.value();
            let expect = OperatorMatrix::from_real_diagonal(&[-s * g * g / delta, s * g * g / delta]);
            assert!((&heff - &expect).max_norm() < 1e-16);
            let later = effective_hamiltonian(&h, &f, 17.3).unwrap();
            assert_eq!(heff, later);
        }
    }

    #[test]
    fn generator_lists() {
        let op = sigma_minus();
        let f = FilterSpec::<f64>::gaussian(5.0).unwrap();
        let single = HarmonicHamiltonian::new(
            OperatorMatrix::zeros(2),
            vec![OscillatingTerm::new(op.clone(), -5.0, "h")],
            vec![OscillatingTerm::new(op.clone(), 40.0, "g")],
            HcSign::Hermitian,
        )
        .unwrap();
        let gen = second_order_generator(&single, &f).unwrap();
        assert!(gen.anticommutator_terms.is_empty() && gen.dissipator_terms.is_empty());

        let equal = HarmonicHamiltonian::new(
            OperatorMatrix::zeros(2),
            vec![OscillatingTerm::new(op.clone(), 3.0, "h1"), OscillatingTerm::new(op.scale_re(0.5), 3.0, "h2")],
            vec![],
            HcSign::Hermitian,
        )
        .unwrap();
        assert!(second_order_generator(&equal, &f).unwrap().anticommutator_terms.is_empty());

        let split = HarmonicHamiltonian::new(
            OperatorMatrix::zeros(2),
            vec![OscillatingTerm::new(op.clone(), 4.0, "h1"), OscillatingTerm::new(op, 6.0, "h2")],
            vec![],
            HcSign::Hermitian,
        )
        .unwrap();
        let gen = second_order_generator(&split, &f).unwrap();
        assert_eq!(gen.anticommutator_terms.len(), 2);
        let t = gen.anticommutator_terms.iter().find(|t| t.n == 0 && t.m == 1).unwrap();
        assert!((t.coefficient - 1.0 / 24.0).abs() < 1e-16);
        assert!((t.residual - 2.0).abs() < 1e-16);
    }

    #[test]
    fn generator_reduces_to_heisenberg_without_cross_terms() {
        let op = sigma_minus().scale_re(0.2);
        let h = HarmonicHamiltonian::new(
            OperatorMatrix::from_real_diagonal(&[0.0, 0.05]),
            vec![OscillatingTerm::new(op, -3.0, "h")],
            vec![],
            HcSign::Hermitian,
        )
        .unwrap();
        let gen = second_order_generator(&h, &FilterSpec::gaussian(1.0).unwrap()).unwrap();
        let x = OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let t = 7.0;
        let numeric = gen.propagate(&x, t, 400);
        let u = gen.h_eff.matrix_function(qcr_spaces::SpectralFn::Propagator(t)).unwrap();
        let exact = x.conjugate_by(&u.adjoint());
        assert!((&numeric - &exact).max_norm() < 1e-9);
    }

    proptest! {
        #[test]
        fn effective_hamiltonian_is_hermitian(
            w1 in -9.0..-2.0f64, w2 in -9.0..-2.0f64, v1 in 20.0..60.0f64,
            g1 in 0.01..0.3f64, g2 in 0.01..0.3f64, phase in 0.0..6.3f64, t in 0.0..50.0f64
        ) {
            let mut a = DMatrix::zeros(3, 3);
            a[(0, 2)] = c(g1);
            let mut b = DMatrix::zeros(3, 3);
            b[(1, 2)] = Complex::from_polar(g2, phase);
            let h = HarmonicHamiltonian::new(
                OperatorMatrix::from_real_diagonal(&[0.0, 0.1, 0.0]),
                vec![OscillatingTerm::new(OperatorMatrix::new(a.clone()), w1, "a"), OscillatingTerm::new(OperatorMatrix::new(b.clone()), w2, "b")],
                vec![OscillatingTerm::new(OperatorMatrix::new(a.adjoint()), v1, "ga")],
                HcSign::Hermitian,
            ).unwrap();
            let heff = effective_hamiltonian(&h, &FilterSpec::gaussian(100.0).unwrap(), t).unwrap();
            prop_assert!(heff.relative_hermiticity_defect() <= 1e-12);
        }
    }
}
