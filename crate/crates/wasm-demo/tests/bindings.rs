use fock_sharp_wasm::{explore_json, gaussian_profile_json, sweep_json};

#[test]
fn sweep_approaches_sqrt_c_p_from_below() {
    let v = sweep_json(4.0, 50).unwrap();
    let root = v["sqrt_c_p"].as_f64().unwrap();
    assert!((root - 1.0675923980983515).abs() < 1e-14);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[0]["ratio"].as_f64().unwrap(), 1.0);
    assert!((rows[1]["ratio"].as_f64().unwrap() - 1.048426392061078).abs() < 1e-14);
    assert!(rows.iter().all(|r| r["ratio"].as_f64().unwrap() < root));
}

#[test]
fn gaussian_profile_increases_towards_the_sup() {
    let v = gaussian_profile_json(3.0, 200).unwrap();
    assert_eq!(v["attained"], false);
    let sup = v["sup"].as_f64().unwrap();
    let g: Vec<f64> = v["points"].as_array().unwrap().iter().map(|p| p["g"].as_f64().unwrap()).collect();
    assert_eq!(g.len(), 200);
    assert!(g.windows(2).all(|w| w[1] >= w[0] - 1e-14));
    assert!(g.iter().all(|&x| x <= sup + 1e-14));
}

#[test]
fn explore_is_deterministic_and_rejects_bad_exponents() {
    let a = explore_json(3.0, 2, 2, 5).unwrap();
    let b = explore_json(3.0, 2, 2, 5).unwrap();
    assert_eq!(a, b);
    assert!(a["best_ratio"].as_f64().unwrap() <= 3f64.powf(-1.0 / 3.0) * 1.5f64.powf(-1.0 / 1.5) * 2.0);
    assert!(explore_json(0.5, 2, 2, 5).is_err());
    assert!(sweep_json(f64::NAN, 3).is_err());
}
