use ness_core::sweep::{
    read_rows, run_sweep, write_rows, Axis, AxisName, Format, Mode, Preset, SweepRow, SweepSpec,
};
use ness_core::{run_point, SolverChoice};

fn fig4_row(tm: f64) -> SweepSpec {
    SweepSpec {
        mode: Mode::TmDtGrid,
        epsilon: 3.0,
        j1: 0.5,
        j2: 2.5,
        tm: Some(tm),
        axes: vec![Axis::dt_auto(21)],
        ..SweepSpec::default()
    }
}

#[test]
fn mirrored_sweep_swaps_nearest_neighbours() {
    let forward = run_sweep(&fig4_row(0.4)).unwrap();
    let mirror = run_sweep(&SweepSpec {
        j1: 2.5,
        j2: 0.5,
        ..fig4_row(0.4)
    })
    .unwrap();
    let n = forward.len();
    for (i, row) in forward.iter().enumerate() {
        let m = &mirror[n - 1 - i];
        assert!((row.delta_t() + m.delta_t()).abs() < 1e-12);
        assert!((row.c12 - m.c23).abs() <= 1e-8);
        assert!((row.c23 - m.c12).abs() <= 1e-8);
        assert!((row.c13 - m.c13).abs() <= 1e-8);
    }
}

#[test]
fn rows_carry_solver_certificates() {
    let rows = run_sweep(&fig4_row(0.6)).unwrap();
    for r in &rows {
        assert!(!r.singular);
        assert!(r.residual <= 1e-9 && r.null_gap > 1e-8);
        assert!((r.populations().iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        assert!(r.populations().iter().all(|&p| p >= -1e-12));
    }
}

#[test]
fn symmetric_sweep_has_equal_nearest_neighbours() {
    let spec = SweepSpec {
        mode: Mode::TempGrid,
        axes: vec![
            Axis::linear(AxisName::Tl, 0.1, 1.5, 6),
            Axis::linear(AxisName::Tr, 0.1, 1.5, 6),
        ],
        ..SweepSpec::default()
    };
    for r in run_sweep(&spec).unwrap() {
        assert!((r.c12 - r.c23).abs() <= 1e-8);
    }
}

#[test]
fn point_solve_with_both_solvers() {
    let spec = SweepSpec {
        tl: Some(0.2),
        tr: Some(0.2),
        solver: SolverChoice::Both,
        ..SweepSpec::default()
    };
    let row = run_point(&spec).unwrap();
    assert!((row.c12 - row.c23).abs() <= 1e-8);
    assert!(row.c12 > 0.0);
    let rk4 = run_point(&SweepSpec {
        solver: SolverChoice::Rk4,
        ..spec.clone()
    })
    .unwrap();
    assert!(rk4.null_gap.is_nan());
    assert!((rk4.c12 - row.c12).abs() <= 1e-6);
}

#[test]
fn emission_is_deterministic_and_round_trips() {
    let spec = SweepSpec {
        axes: vec![Axis::dt_auto(5)],
        ..fig4_row(0.3)
    };
    let render = |format| {
        let mut buf = Vec::new();
        write_rows(&run_sweep(&spec).unwrap(), format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let (csv_a, csv_b) = (render(Format::Csv), render(Format::Csv));
    assert_eq!(csv_a, csv_b);
    let json = render(Format::Json);
    assert_eq!(json, render(Format::Json));
    let rows: Vec<SweepRow> = read_rows(&json, Format::Json).unwrap();
    assert_eq!(rows, run_sweep(&spec).unwrap());
    assert_eq!(read_rows(&csv_a, Format::Csv).unwrap(), rows);

    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let keys: Vec<&String> = value[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), ness_core::sweep::COLUMNS.len());
}

#[test]
fn emit_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let rows = run_sweep(&SweepSpec {
        axes: vec![Axis::dt_auto(3)],
        ..fig4_row(0.5)
    })
    .unwrap();
    ness_core::emit(&rows, Format::Csv, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);
    assert!(ness_core::emit(&rows, Format::Csv, &dir.path().join("missing/out.csv")).is_err());
}

#[test]
fn fig5_population_dominance() {
    for row in run_sweep(&Preset::Fig5.spec()).unwrap() {
        let p = row.populations();
        let best = (2..8).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        assert_eq!(best, 5, "p6 should dominate at dT = {}", row.delta_t());
    }
}
