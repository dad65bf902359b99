use swfv_web::{case_by_name, interface_flux, stoker_samples, WebSimulation};

#[test]
fn simulation_runs_and_conserves() {
    let mut sim = WebSimulation::create("water_drop", 20, 20).unwrap();
    assert_eq!(sim.cells(), 800);
    assert_eq!(sim.triangles().len(), 3 * 800);
    assert_eq!(sim.nodes().len(), 2 * 441);
    let t = sim.advance(25).unwrap();
    assert!(t > 0.0);
    assert_eq!(sim.steps(), 25.0);
    assert!(sim.mass_drift().abs() < 1e-12);
    assert_eq!(sim.depth().len(), 800);
    assert_eq!(sim.bounds(), vec![0.0, 0.0, 1000.0, 1000.0]);
}

#[test]
fn drop_adds_water_and_resets_reference() {
    let mut sim = WebSimulation::create("lake_at_rest", 30, 12).unwrap();
    let before = sim.mass();
    sim.drop_water(20.0, 15.0, 0.3, 3.0).unwrap();
    assert!(sim.mass() > before);
    assert_eq!(sim.mass_drift(), 0.0);
    sim.advance(20).unwrap();
    assert!(sim.mass_drift().abs() < 1e-12);
    assert!(sim.drop_water(0.0, 0.0, -1.0, 1.0).is_err());
}

#[test]
fn stops_at_case_end() {
    let mut sim = WebSimulation::create("dam_break_1d", 50, 1).unwrap();
    let t = sim.advance(100_000).unwrap();
    assert_eq!(t, 6.0);
    assert_eq!(sim.advance(10).unwrap(), 6.0);
}

#[test]
fn unknown_case() {
    assert!(case_by_name("tsunami").is_err());
    assert!(WebSimulation::create("tsunami", 2, 2).is_err());
}

#[test]
fn still_interface_has_no_mass_flux() {
    let f = interface_flux(2.0, 0.0, 2.0, 0.0).unwrap();
    assert_eq!(f[0], 0.0);
    assert!((f[1] - 0.5 * 9.81 * 4.0).abs() < 1e-12);
    assert!(f[2] < 0.0 && f[4] > 0.0);
    assert!(interface_flux(-1.0, 0.0, 1.0, 0.0).is_err());
}

#[test]
fn stoker_profile_shape() {
    let p = stoker_samples(1.0, 0.1, 2.0, 100.0, 101).unwrap();
    assert_eq!(p.len(), 303);
    assert_eq!(p[1], 1.0);
    assert_eq!(p[300 + 1], 0.1);
    let initial = stoker_samples(1.0, 0.1, 0.0, 100.0, 11).unwrap();
    assert_eq!(initial[3 * 4 + 1], 1.0);
    assert_eq!(initial[3 * 6 + 1], 0.1);
    assert!(stoker_samples(0.1, 1.0, 1.0, 100.0, 11).is_err());
}
