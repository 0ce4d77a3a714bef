use dualprune::synthetic::{sigmoid, train_linear};
use dualprune::{generate_linear_log, simulate_two_point, LabeledPoint, TwoPointConfig};

fn two_point_data(cfg: &TwoPointConfig) -> Vec<LabeledPoint> {
    vec![
        LabeledPoint {
            x: cfg.x1,
            label: 1,
        },
        LabeledPoint {
            x: cfg.x2,
            label: 1,
        },
    ]
}

#[test]
fn linear_trainer_reproduces_two_point_outputs() {
    for eta in [0.01, 0.001] {
        let cfg = TwoPointConfig {
            t_max: 2000,
            ..TwoPointConfig::reference_with_eta(eta)
        };
        let traj = simulate_two_point(&cfg).unwrap();
        let run = train_linear(&two_point_data(&cfg), eta, cfg.t_max);
        for t in 1..=cfg.t_max {
            let m = &run.margins[t - 1];
            assert!(
                (m[0] - traj.y1[t]).abs() < 1e-12,
                "eta={eta} t={t}: {} vs {}",
                m[0],
                traj.y1[t]
            );
            assert!(
                (m[1] - traj.y2[t]).abs() < 1e-12,
                "eta={eta} t={t}: {} vs {}",
                m[1],
                traj.y2[t]
            );
            assert!((sigmoid(m[0]) - traj.sig1[t]).abs() < 1e-12);
            assert!((sigmoid(m[1]) - traj.sig2[t]).abs() < 1e-12);
        }
    }
}

#[test]
fn generated_log_matches_two_point_probabilities() {
    let cfg = TwoPointConfig {
        t_max: 500,
        ..TwoPointConfig::reference()
    };
    let traj = simulate_two_point(&cfg).unwrap();
    let log = generate_linear_log(&two_point_data(&cfg), 0.0, cfg.eta, cfg.t_max, 0).unwrap();
    assert!(log.noise_flags().unwrap().iter().all(|&f| !f));
    for t in 1..=cfg.t_max {
        // records are f32
        assert!((log.record(0, t).p_target as f64 - traj.sig1[t]).abs() < 1e-7);
        assert!((log.record(1, t).p_target as f64 - traj.sig2[t]).abs() < 1e-7);
    }
}
