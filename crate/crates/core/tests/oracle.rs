//! Energetics frozen from 50-digit direct evaluation (`oracles/spin_cycle.py`).

use otto_core::boundaries::DEFAULT_TOL;
use otto_core::{
    cycle_energetics, find_gap, CycleEnergetics, CycleParams, Level, SpinModelParams, WorkingMedium,
};

struct Expected {
    q_a: f64,
    q_b: f64,
    w_ba: f64,
    w_ab: f64,
    w: f64,
    dp: &'static [f64],
}

fn close(actual: f64, expected: f64, what: &str) {
    let err = (actual - expected).abs() / expected.abs();
    assert!(err < 1e-12, "{what}: {actual} vs {expected} (rel {err:e})");
}

fn check(e: &CycleEnergetics, x: &Expected) {
    close(e.heat_a, x.q_a, "Q_a");
    close(e.heat_b, x.q_b, "Q_b");
    close(e.work_expansion, x.w_ba, "W_ba");
    close(e.work_compression, x.w_ab, "W_ab");
    close(e.work, x.w, "W");
    assert_eq!(e.delta_p.len(), x.dp.len());
    for (n, (&a, &b)) in e.delta_p.iter().zip(x.dp).enumerate() {
        close(a, b, &format!("dp[{n}]"));
    }
}

fn run(medium: &WorkingMedium, lambda_a: f64, lambda_b: f64, t_a: f64, t_b: f64) -> CycleEnergetics {
    cycle_energetics(medium, &CycleParams::new(lambda_a, lambda_b, t_a, t_b).unwrap()).unwrap()
}

#[test]
fn spin_reference_cycle() {
    let e = run(&WorkingMedium::coupled_spin(0.7).unwrap(), 2.0, 1.0, 5.0, 1.0);
    check(
        &e,
        &Expected {
            q_a: 1.9321397390049639282,
            q_b: -2.4072200102431689349,
            w_ba: 0.052007170057816594002,
            w_ab: -0.52708744129602160069,
            w: -0.47508027123820500669,
            dp: &[
                -0.51469647883595963242,
                0.30372372488440066386,
                0.14478916468626080805,
                0.066183589265298160512,
            ],
        },
    );
}

#[test]
fn spin_hot_limit_cycle() {
    let e = run(&WorkingMedium::coupled_spin(0.24).unwrap(), 2.0, 1.0, 1e4, 0.05);
    check(
        &e,
        &Expected {
            q_a: 3.1697291753752064389,
            q_b: -1.5060923859011035866,
            w_ba: 1.6640367702678489578,
            w_ab: -0.00039998079374610551339,
            w: 1.6636367894741028523,
            dp: &[
                0.082054376860937117521,
                -0.581930380511479024,
                0.24998798942496950434,
                0.24988801422557240214,
            ],
        },
    );
}

#[test]
fn qutrit_cycles() {
    let m = WorkingMedium::qutrit(0.7).unwrap();
    check(
        &run(&m, 2.0, 1.0, 5.0, 1.0),
        &Expected {
            q_a: 1.3247079896033176934,
            q_b: -1.8914326459970122917,
            w_ba: 0.052194279324207591923,
            w_ab: -0.61891893571790219024,
            w: -0.56672465639369459831,
            dp: &[-0.43895666114119765892, 0.36115949466902247904, 0.077797166472175179884],
        },
    );
    check(
        &run(&m, 2.0, 1.0, 0.3, 4.0),
        &Expected {
            q_a: -1.3330481309683204047,
            q_b: 1.6537447991276042953,
            w_ba: 0.33030617393357759624,
            w_ab: -0.0096095057742937056856,
            w: 0.32069666815928389056,
            dp: &[0.35257883344408717604, -0.25646358376186456066, -0.09611524968222261538],
        },
    );
}

#[test]
fn degenerate_custom_medium() {
    let m = WorkingMedium::new(
        "custom",
        vec![
            Level::idle(-7.0).with_degeneracy(2).unwrap(),
            Level::working(-2.0),
            Level::working(0.5).with_degeneracy(3).unwrap(),
            Level::working(3.0),
        ],
    )
    .unwrap();
    check(
        &run(&m, 3.0, 1.0, 2.5, 0.7),
        &Expected {
            q_a: 0.55771015504826162147,
            q_b: -1.4836892079786775832,
            w_ba: 0.0015451055973655688125,
            w_ab: -0.92752415852778153055,
            w: -0.92597905293041596174,
            dp: &[
                -0.27809696206341222344,
                0.24141427615251664212,
                0.036083612757144576236,
                0.00059907315375100508424,
            ],
        },
    );
}

#[test]
fn gap_endpoints() {
    let cases = [
        (0.7, [0.90595061110087999346, 3.3379085526558001043, 11.854205562169924044], 0.14574611139187764914),
        (1.0, [1.8577907946152626466, 4.883068631242233015, 17.145242227038886589], 0.10127371219306624764),
    ];
    for (j, [t_a1, t_b0, t_a2], gbar) in cases {
        let gap = find_gap(&SpinModelParams::new(j, 2.0, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        assert!((gap.t_a1 - t_a1).abs() < 1e-8, "J={j}");
        assert!((gap.t_a2 - t_a2).abs() < 1e-8, "J={j}");
        // the peak position is flat to second order
        assert!((gap.t_b0 - t_b0).abs() < 1e-6, "J={j}");
        assert!((gap.gbar_max - gbar).abs() < 1e-14, "J={j}");
    }
}
