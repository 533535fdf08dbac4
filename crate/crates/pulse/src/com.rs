//! Gaussian single-particle amplitudes, their centre-of-mass energy and the
//! free-propagation phase factor of the delta pulse.

use num_complex::Complex;
use qcr_lambda::{relevant_level, LambdaModel};
use qcr_spaces::scalar::{cr, lit};
use qcr_spaces::{PhotonMode, Real};

use crate::error::PulseError;

/// f(R) = (2π)^{-d/2} σ^{-d} e^{iκ·R} e^{−R²/2σ²}
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianAmplitude<T: Real> {
    pub sigma: T,
    pub kappa: Vec<T>,
}

impl<T: Real> GaussianAmplitude<T> {
    pub fn new(sigma: T, kappa: Vec<T>) -> Result<Self, PulseError> {
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(PulseError::InvalidAmplitude(format!("sigma must be positive, got {}", qcr_spaces::scalar::to_f64(sigma))));
        }
        if !matches!(kappa.len(), 1 | 3) {
            return Err(PulseError::InvalidAmplitude(format!("dimension must be 1 or 3, got {}", kappa.len())));
        }
        Ok(Self { sigma, kappa })
    }

    pub fn dim(&self) -> usize {
        self.kappa.len()
    }

    fn check(&self, r: &[T]) -> Result<(), PulseError> {
        if r.len() != self.dim() {
            return Err(PulseError::Dimension { expected: self.dim(), got: r.len() });
        }
        Ok(())
    }

    pub fn eval(&self, r: &[T]) -> Result<Complex<T>, PulseError> {
        self.check(r)?;
        let two_pi: T = lit(std::f64::consts::TAU);
        let d = lit::<T>(self.dim() as f64);
        let r2 = dot(r, r);
        let kr = dot(&self.kappa, r);
        let pre = two_pi.powf(-d / lit(2.0)) * self.sigma.powf(-d);
        let env = (-r2 / (lit::<T>(2.0) * self.sigma * self.sigma)).exp();
        Ok(Complex::new(kr.cos(), kr.sin()) * cr(pre * env))
    }

    /// 𝒩 = (∫|f|²)^{-1/2} = (2^d π^{d/2} σ^d)^{1/2}
    pub fn normalization(&self) -> T {
        let d = lit::<T>(self.dim() as f64);
        let pi: T = lit(std::f64::consts::PI);
        (lit::<T>(2.0).powf(d) * pi.powf(d / lit(2.0)) * self.sigma.powf(d)).sqrt()
    }

    /// One-dimensional Fourier amplitude ∫f(R)e^{−ikR}dR = e^{−σ²(k−κ)²/2}.
    pub fn momentum_amplitude(&self, k: T) -> T {
        let dk = k - self.kappa[0];
        (-self.sigma * self.sigma * dk * dk / lit(2.0)).exp()
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

/// 𝓔_COM(R) = −(1/2M)(R² − 2iσ²κ·R − dσ² − σ⁴κ²)/σ⁴, i.e. −∇²f/(2M f).
pub fn gaussian_com_energy<T: Real>(amp: &GaussianAmplitude<T>, r: &[T], mass: T) -> Result<Complex<T>, PulseError> {
    amp.check(r)?;
    let s2 = amp.sigma * amp.sigma;
    let d = lit::<T>(amp.dim() as f64);
    let two: T = lit(2.0);
    let re = dot(r, r) - d * s2 - s2 * s2 * dot(&amp.kappa, &amp.kappa);
    let im = -two * s2 * dot(&amp.kappa, r);
    let pre = -T::one() / (two * mass * s2 * s2);
    Ok(Complex::new(re * pre, im * pre))
}

/// 𝒞_{n_α,α}(R) = 𝓔_COM + Σ_α′ Ω_α′(n_α′ + ½) + ω_α + s·[Σ_j |Ω_{jα}|²/ω⁽⁺⁾ n_α − |Λ_{jα}|²/Ω⁽⁺⁾ (n_α + 1)],
/// s the hermitian-conjugate sign; the Λ term is absent under RWA.
pub fn phase_factor_c<T: Real>(
    model: &LambdaModel<T>,
    alpha: PhotonMode,
    photons: [usize; 2],
    com_energy: Complex<T>,
    r: T,
) -> Complex<T> {
    let (cs, d) = (model.couplings(), model.detunings());
    let unit = model.basis().modes().backend().unit();
    let half: T = lit(0.5);
    let mut light = T::zero();
    for (i, a) in PhotonMode::BOTH.into_iter().enumerate() {
        light += cs.photon_frequency(a) * (lit::<T>(photons[i] as f64) + half);
    }
    let n = lit::<T>(photons[alpha.index()] as f64);
    let mut shift = T::zero();
    for j in 0..model.n_ancillas() {
        let o = cs.omega(j, alpha).eval(r, unit).unwrap_or_default().norm_sqr();
        let l = cs.lambda(j, alpha).eval(r, unit).unwrap_or_default().norm_sqr();
        shift += o * d.inv_slow(j, j, alpha, alpha) * n - l * d.inv_fast(j, j, alpha, alpha) * (n + T::one());
    }
    let s: T = model.hc_sign().value();
    let omega_alpha = model.levels().omega(relevant_level(alpha));
    com_energy + cr(light + omega_alpha + s * shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduced::tests::uniform_model;
    use proptest::prelude::*;
    use qcr_averaging::HcSign;
    use qcr_spaces::StateVector;

    /// −∇²f/(2Mf) by central differences, h = 1e-3σ.
    fn laplacian_oracle(amp: &GaussianAmplitude<f64>, r: &[f64], mass: f64) -> Complex<f64> {
        let h = 1e-3 * amp.sigma;
        let f0 = amp.eval(r).unwrap();
        let mut lap = Complex::new(0.0, 0.0);
        for i in 0..r.len() {
            let (mut p, mut q) = (r.to_vec(), r.to_vec());
            p[i] += h;
            q[i] -= h;
            lap += (amp.eval(&p).unwrap() - f0 * 2.0 + amp.eval(&q).unwrap()) / (h * h);
        }
        -lap / (f0 * 2.0 * mass)
    }

    #[test]
    fn origin_value_in_three_dimensions() {
        let amp = GaussianAmplitude::<f64>::new(0.7, vec![0.0; 3]).unwrap();
        let e = gaussian_com_energy(&amp, &[0.0; 3], 2.0).unwrap();
        assert!((e.re - 3.0 / (2.0 * 2.0 * 0.49)).abs() < 1e-14);
        assert_eq!(e.im, 0.0);
    }

    #[test]
    fn cancellation_at_one_sigma() {
        let amp = GaussianAmplitude::<f64>::new(1.3, vec![0.0]).unwrap();
        let e = gaussian_com_energy(&amp, &[1.3], 1.0).unwrap();
        assert!(e.re.abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(GaussianAmplitude::new(-1.0, vec![0.0]).is_err());
        assert!(GaussianAmplitude::new(1.0, vec![0.0; 2]).is_err());
        let amp = GaussianAmplitude::new(1.0, vec![0.0]).unwrap();
        assert!(gaussian_com_energy(&amp, &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn normalization_by_quadrature() {
        let amp = GaussianAmplitude::new(0.8, vec![1.5]).unwrap();
        let h = 1e-3;
        let integral: f64 = (-10000..=10000).map(|i| amp.eval(&[i as f64 * h]).unwrap().norm_sqr() * h).sum();
        assert!((integral * amp.normalization().powi(2) - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn com_energy_matches_laplacian(sigma in 0.3f64..3.0, k in -2.0f64..2.0, x in -2.0f64..2.0, three: bool) {
            let d = if three { 3 } else { 1 };
            let kappa: Vec<f64> = (0..d).map(|i| k * (1.0 - 0.3 * i as f64)).collect();
            let r: Vec<f64> = (0..d).map(|i| x * sigma * (1.0 + 0.2 * i as f64)).collect();
            let amp = GaussianAmplitude::new(sigma, kappa).unwrap();
            let e = gaussian_com_energy(&amp, &r, 1.7).unwrap();
            let o = laplacian_oracle(&amp, &r, 1.7);
            let scale = e.norm().max(1.0 / (1.7 * sigma * sigma));
            prop_assert!((e - o).norm() / scale < 1e-5);
        }
    }

    #[test]
    fn phase_factor_without_couplings() {
        let m = uniform_model([0.0, 0.0], false, 3, &[1]);
        let com = Complex::new(0.25, -0.1);
        let c = phase_factor_c(&m, PhotonMode::B, [2, 1], com, 0.0);
        let expect = 0.25 + 100.0 * 2.5 + 90.0 * 1.5 + 10.0;
        assert!((c - Complex::new(expect, -0.1)).norm() < 1e-12);
    }

    #[test]
    fn phase_factor_is_free_energy_expectation() {
        let m = uniform_model([0.1, 0.07], false, 4, &[1]);
        let r = crate::reduced::ReducedHamiltonian::from_model(&m).unwrap();
        let b = m.basis();
        for alpha in PhotonMode::BOTH {
            let lvl = relevant_level(alpha);
            for (na, nb) in [(0, 0), (2, 1), (3, 4)] {
                let i = b.find(&b.occupation(&[(lvl, 0)]).unwrap(), na, nb).unwrap();
                let psi = StateVector::basis_state(b.dim(), i);
                let c = phase_factor_c(&m, alpha, [na, nb], Complex::new(0.0, 0.0), 0.0);
                assert!((c - r.h0.expectation(&psi)).norm() < 1e-12);
            }
        }
        let rwa = uniform_model([0.1, 0.07], true, 4, &[1]);
        let lit = rwa.with_hc_sign(HcSign::Literal);
        let c1 = phase_factor_c(&lit, PhotonMode::A, [1, 0], Complex::new(0.0, 0.0), 0.0);
        let c2 = phase_factor_c(&lit, PhotonMode::A, [2, 0], Complex::new(0.0, 0.0), 0.0);
        // entangling term −|Ω|²/ω⁽⁺⁾ n_a differs between photon numbers beyond the bare light energy
        assert!(((c2 - c1).re - 100.0 - 0.01 / 5.0).abs() < 1e-12);
    }
}
