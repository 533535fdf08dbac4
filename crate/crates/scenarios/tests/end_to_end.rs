use qcr_pulse::PulseSpec;
use qcr_scenarios::{
    hom_frequency, run_hom, run_single_particle, sweep, AtomicInput, BeamSplitter, Internal, OpticalInput, PairInput,
    RamanSetup, Scenario, SweepParameter,
};

#[test]
fn parallel_sweep_is_order_stable_and_thread_independent() {
    let setup = RamanSetup::<f64>::desk();
    let s = Scenario::Hom { pair: PairInput::ab(0, setup.kick()), light: OpticalInput::fock(1, 1), setup };
    let grid: Vec<f64> = (0..40).map(|i| i as f64 * 10.0).collect();
    std::env::set_var("SIM_THREADS", "1");
    let one = sweep(&s, 0.0, SweepParameter::Theta, &grid).unwrap();
    std::env::set_var("SIM_THREADS", "4");
    let four = sweep(&s, 0.0, SweepParameter::Theta, &grid).unwrap();
    std::env::set_var("SIM_THREADS", "zero");
    assert!(sweep(&s, 0.0, SweepParameter::Theta, &grid).is_err());
    std::env::remove_var("SIM_THREADS");
    assert_eq!(one, four);
    assert!(one.windows(2).all(|w| w[0].value < w[1].value));
}

#[test]
fn single_and_two_atom_runs_share_the_rabi_element() {
    let setup = RamanSetup::<f64>::desk();
    let w1 = hom_frequency(&setup, 1).unwrap();
    let pulse = PulseSpec::from_theta(0.4 / w1).unwrap();
    let hom = run_hom(&setup, &PairInput::ab(0, 2), &OpticalInput::fock(1, 1), &pulse).unwrap();
    assert!((hom.coincidence - 0.8f64.cos().powi(2)).abs() < 1e-10);
    let one = run_single_particle(&setup, &AtomicInput::momentum(Internal::A, 0), &OpticalInput::fock(1, 1), &pulse).unwrap();
    // one atom sees |Ω|√2 = Ω₁
    assert!((one.internal(0, 1) - 0.4f64.sin().powi(2)).abs() < 1e-10);
    let bs = BeamSplitter::new(&setup, pulse.theta()).unwrap().sector(0, [1, 1]);
    assert!((bs.entry(0, 1).norm_sqr() - one.internal(0, 1)).abs() < 1e-10);
}
