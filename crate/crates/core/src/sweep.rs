//! Single-point solves and parameter-grid sweeps, with CSV/JSON output.
//!
//! A grid has one or two axes. Points are ordered with the first axis outermost
//! and are evaluated in parallel, then collected in that order.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::entanglement::{eigenstate_populations, pairwise_concurrences};
use crate::error::{Error, Result};
use crate::lindblad::{BathSpec, DEFAULT_GAMMA};
use crate::model::{analytic_eigensystem, ModelParams};
use crate::state::DensityMatrix;
use crate::steady::{self, Rk4Options};

/// Largest trace distance tolerated between the two solvers when both run.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Default margin keeping `|ΔT|` strictly below `2 T_M` on automatic ΔT axes.
pub const DT_MARGIN: f64 = 0.05;

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $($kw:literal)|+),+ $(,)? }) => {
        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($($kw)|+ => Ok($name::$variant),)+
                    other => Err(Error::Sweep(format!(concat!("unknown ", stringify!($name), " `{}`"), other))),
                }
            }
        }
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let names: &[&str] = match self { $($name::$variant => &[$($kw),+],)+ };
                f.write_str(names[0])
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Point,
    TempGrid,
    TmDtGrid,
    CouplingGrid,
}

keyword_enum!(Mode {
    Point => "point",
    TempGrid => "temp-grid",
    TmDtGrid => "tm-dt-grid",
    CouplingGrid => "coupling-grid",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverChoice {
    NullSpace,
    Rk4,
    Both,
}

keyword_enum!(SolverChoice {
    NullSpace => "null-space" | "null",
    Rk4 => "rk4",
    Both => "both",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

keyword_enum!(Format { Csv => "csv", Json => "json" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisName {
    Tl,
    Tr,
    Tm,
    Dt,
    J1,
    J2,
}

keyword_enum!(AxisName {
    Tl => "tl",
    Tr => "tr",
    Tm => "tm",
    Dt => "dt" | "delta-t",
    J1 => "j1",
    J2 => "j2",
});

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AxisRange {
    /// `count` evenly spaced values from `min` to `max` inclusive.
    Linear {
        min: f64,
        max: f64,
        count: usize,
    },
    Values(Vec<f64>),
    /// ΔT axis spanning `[−2T_M + margin, 2T_M − margin]` at each point's `T_M`.
    DtAuto {
        margin: f64,
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub range: AxisRange,
}

fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    let span = max - min;
    (0..count)
        .map(|i| min + span * (i as f64 / (count - 1) as f64))
        .collect()
}

impl Axis {
    pub fn linear(name: AxisName, min: f64, max: f64, count: usize) -> Self {
        Self {
            name,
            range: AxisRange::Linear { min, max, count },
        }
    }

    pub fn values(name: AxisName, values: Vec<f64>) -> Self {
        Self {
            name,
            range: AxisRange::Values(values),
        }
    }

    pub fn dt_auto(count: usize) -> Self {
        Self {
            name: AxisName::Dt,
            range: AxisRange::DtAuto {
                margin: DT_MARGIN,
                count,
            },
        }
    }

    pub fn len(&self) -> usize {
        match &self.range {
            AxisRange::Linear { count, .. } | AxisRange::DtAuto { count, .. } => *count,
            AxisRange::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn samples(&self, t_mean: Option<f64>) -> Result<Vec<f64>> {
        match &self.range {
            AxisRange::Linear { min, max, count } => Ok(linspace(*min, *max, *count)),
            AxisRange::Values(v) => Ok(v.clone()),
            AxisRange::DtAuto { margin, count } => {
                let tm = t_mean.ok_or_else(|| {
                    Error::Sweep("automatic dt axis needs a mean temperature".into())
                })?;
                let half = 2.0 * tm - margin;
                if !(half > 0.0) {
                    return Err(Error::Sweep(format!(
                        "tm = {tm} leaves no room for a dt axis with margin {margin}"
                    )));
                }
                Ok(linspace(-half, half, *count))
            }
        }
    }

    /// Parses `NAME:MIN:MAX:COUNT`, or `dt:auto:COUNT`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let bad = || Error::Sweep(format!("bad axis `{text}`, expected NAME:MIN:MAX:COUNT"));
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let count = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            [name, "auto", n] => {
                let name: AxisName = name.parse()?;
                if name != AxisName::Dt {
                    return Err(Error::Sweep("only the dt axis accepts `auto`".into()));
                }
                Ok(Axis::dt_auto(count(n)?))
            }
            [name, min, max, n] => Ok(Axis::linear(name.parse()?, num(min)?, num(max)?, count(n)?)),
            _ => Err(bad()),
        }
    }
}

/// Everything needed to run a point or a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: Mode,
    pub epsilon: f64,
    pub j1: f64,
    pub j2: f64,
    pub tl: Option<f64>,
    pub tr: Option<f64>,
    pub tm: Option<f64>,
    pub dt: Option<f64>,
    pub gamma_l: f64,
    pub gamma_r: f64,
    pub axes: Vec<Axis>,
    pub solver: SolverChoice,
    pub format: Format,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Point,
            epsilon: 1.0,
            j1: 1.0,
            j2: 1.0,
            tl: None,
            tr: None,
            tm: None,
            dt: None,
            gamma_l: DEFAULT_GAMMA,
            gamma_r: DEFAULT_GAMMA,
            axes: Vec::new(),
            solver: SolverChoice::NullSpace,
            format: Format::Csv,
        }
    }
}

/// Inputs of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointInput {
    pub epsilon: f64,
    pub j1: f64,
    pub j2: f64,
    pub tl: f64,
    pub tr: f64,
    pub gamma_l: f64,
    pub gamma_r: f64,
}

impl fmt::Display for PointInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "epsilon={} j1={} j2={} tl={} tr={} gamma_l={} gamma_r={}",
            self.epsilon, self.j1, self.j2, self.tl, self.tr, self.gamma_l, self.gamma_r
        )
    }
}

#[derive(Default, Clone, Copy)]
struct Coordinates {
    tl: Option<f64>,
    tr: Option<f64>,
    tm: Option<f64>,
    dt: Option<f64>,
    j1: Option<f64>,
    j2: Option<f64>,
}

impl Coordinates {
    fn set(&mut self, name: AxisName, v: f64) {
        let slot = match name {
            AxisName::Tl => &mut self.tl,
            AxisName::Tr => &mut self.tr,
            AxisName::Tm => &mut self.tm,
            AxisName::Dt => &mut self.dt,
            AxisName::J1 => &mut self.j1,
            AxisName::J2 => &mut self.j2,
        };
        *slot = Some(v);
    }
}

impl SweepSpec {
    fn allowed_axes(&self) -> &'static [AxisName] {
        match self.mode {
            Mode::Point => &[],
            Mode::TempGrid => &[AxisName::Tl, AxisName::Tr],
            Mode::TmDtGrid => &[AxisName::Tm, AxisName::Dt],
            Mode::CouplingGrid => &[AxisName::J1, AxisName::J2],
        }
    }

    fn check_axes(&self) -> Result<()> {
        if self.mode == Mode::Point {
            if !self.axes.is_empty() {
                return Err(Error::Sweep("point mode takes no grid axes".into()));
            }
            return Ok(());
        }
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Sweep(format!("{} needs one or two axes", self.mode)));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::Sweep("the two axes must differ".into()));
        }
        for axis in &self.axes {
            if !self.allowed_axes().contains(&axis.name) {
                return Err(Error::Sweep(format!(
                    "axis {} is not valid in {} mode",
                    axis.name, self.mode
                )));
            }
            if axis.len() < 2 {
                return Err(Error::Sweep(format!(
                    "axis {} needs at least 2 points",
                    axis.name
                )));
            }
            if let AxisRange::Linear { min, max, .. } = axis.range {
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return Err(Error::Sweep(format!(
                        "axis {} has invalid range [{min}, {max}]",
                        axis.name
                    )));
                }
            }
            if matches!(axis.range, AxisRange::DtAuto { .. })
                && self.axes[0].name == AxisName::Dt
                && (self.axes.len() == 2 || self.tm.is_none())
            {
                return Err(Error::Sweep(
                    "an automatic dt axis must follow the tm axis or use a fixed tm".into(),
                ));
            }
        }
        Ok(())
    }

    fn resolve(&self, c: &Coordinates) -> Result<PointInput> {
        let tm = c.tm.or(self.tm);
        let dt = c.dt.or(self.dt);
        let (tl, tr) = match (self.mode, c.tl.or(self.tl), c.tr.or(self.tr), tm, dt) {
            (Mode::TmDtGrid, _, _, Some(tm), Some(dt)) => (tm + dt / 2.0, tm - dt / 2.0),
            (Mode::TmDtGrid, ..) => return Err(Error::Sweep("tm-dt-grid needs tm and dt".into())),
            (_, Some(tl), Some(tr), _, _) => (tl, tr),
            (_, _, _, Some(tm), Some(dt)) => (tm + dt / 2.0, tm - dt / 2.0),
            _ => {
                return Err(Error::Sweep(
                    "temperatures need tl and tr, or tm and dt".into(),
                ))
            }
        };
        if let (Some(tm), Some(dt)) = (tm, dt) {
            if self.mode == Mode::TmDtGrid && dt.abs() >= 2.0 * tm {
                return Err(Error::Sweep(format!(
                    "|dt| = {} must be below 2 tm = {}",
                    dt.abs(),
                    2.0 * tm
                )));
            }
        }
        if !(tl > 0.0 && tr > 0.0 && tl.is_finite() && tr.is_finite()) {
            return Err(Error::Sweep(format!(
                "temperatures must be positive, got tl={tl} tr={tr}"
            )));
        }
        Ok(PointInput {
            epsilon: self.epsilon,
            j1: c.j1.unwrap_or(self.j1),
            j2: c.j2.unwrap_or(self.j2),
            tl,
            tr,
            gamma_l: self.gamma_l,
            gamma_r: self.gamma_r,
        })
    }

    /// All grid points in grid order, validated.
    pub fn points(&self) -> Result<Vec<PointInput>> {
        self.check_axes()?;
        let mut out = Vec::new();
        match self.axes.as_slice() {
            [] => out.push(self.resolve(&Coordinates::default())?),
            [a] => {
                for v in a.samples(self.tm)? {
                    let mut c = Coordinates::default();
                    c.set(a.name, v);
                    out.push(self.resolve(&c)?);
                }
            }
            [a, b] => {
                for va in a.samples(self.tm)? {
                    let mut outer = Coordinates::default();
                    outer.set(a.name, va);
                    let tm = outer.tm.or(self.tm);
                    for vb in b.samples(tm)? {
                        let mut c = outer;
                        c.set(b.name, vb);
                        out.push(self.resolve(&c)?);
                    }
                }
            }
            _ => unreachable!("axis count checked"),
        }
        Ok(out)
    }

    /// Shape of the grid (`[]` for a point).
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }
}

/// Named parameter sets; each pins the couplings, energies and grid of one study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// `C(T_L, T_R)` at ε = 1, J1 = J2 = 1.
    Fig2,
    /// `C(T_L, T_R)` at ε = 3, J1 = J2 = 1.
    Fig3,
    /// `C(T_M, ΔT)` at ε = 3, J1 = 0.5, J2 = 2.5 for five mean temperatures.
    Fig4,
    /// Populations against ΔT at T_M = 0.4, ε = 3, J1 = 0.5, J2 = 2.5.
    Fig5,
    /// Populations against ΔT at T_M = 0.4, ε = 1, J1 = J2 = 1.
    Fig5Sym,
    /// `C(J1, J2)` at ε = 3, T_M = 0.5, ΔT = −0.4.
    Fig6,
}

keyword_enum!(Preset {
    Fig2 => "fig2",
    Fig3 => "fig3",
    Fig4 => "fig4",
    Fig5 => "fig5",
    Fig5Sym => "fig5-sym",
    Fig6 => "fig6",
});

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig5Sym,
        Preset::Fig6,
    ];

    pub fn spec(self) -> SweepSpec {
        let base = SweepSpec::default();
        let temp_grid = |epsilon| SweepSpec {
            mode: Mode::TempGrid,
            epsilon,
            axes: vec![
                Axis::linear(AxisName::Tl, 0.05, 2.0, 40),
                Axis::linear(AxisName::Tr, 0.05, 2.0, 40),
            ],
            ..base.clone()
        };
        let population_scan = |epsilon, j1, j2| SweepSpec {
            mode: Mode::TmDtGrid,
            epsilon,
            j1,
            j2,
            tm: Some(0.4),
            axes: vec![Axis::dt_auto(41)],
            ..base.clone()
        };
        match self {
            Preset::Fig2 => temp_grid(1.0),
            Preset::Fig3 => temp_grid(3.0),
            Preset::Fig4 => SweepSpec {
                mode: Mode::TmDtGrid,
                epsilon: 3.0,
                j1: 0.5,
                j2: 2.5,
                axes: vec![
                    Axis::values(AxisName::Tm, vec![0.2, 0.4, 0.6, 0.8, 1.0]),
                    Axis::dt_auto(41),
                ],
                ..base.clone()
            },
            Preset::Fig5 => population_scan(3.0, 0.5, 2.5),
            Preset::Fig5Sym => population_scan(1.0, 1.0, 1.0),
            Preset::Fig6 => SweepSpec {
                mode: Mode::CouplingGrid,
                epsilon: 3.0,
                tm: Some(0.5),
                dt: Some(-0.4),
                axes: vec![
                    Axis::linear(AxisName::J1, 0.1, 3.0, 30),
                    Axis::linear(AxisName::J2, 0.1, 3.0, 30),
                ],
                ..base
            },
        }
    }
}

fn nan_from_null<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// One output record. Derived quantities are NaN on `singular` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub j1: f64,
    pub j2: f64,
    pub tl: f64,
    pub tr: f64,
    pub gamma_l: f64,
    pub gamma_r: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub c12: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub c13: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub c23: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p1: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p2: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p3: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p4: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p5: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p6: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p7: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub p8: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub residual: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub null_gap: f64,
    pub singular: bool,
}

/// Column names, in output order.
pub const COLUMNS: [&str; 21] = [
    "epsilon", "j1", "j2", "tl", "tr", "gamma_l", "gamma_r", "c12", "c13", "c23", "p1", "p2", "p3",
    "p4", "p5", "p6", "p7", "p8", "residual", "null_gap", "singular",
];

impl SweepRow {
    fn blank(input: &PointInput) -> Self {
        let nan = f64::NAN;
        Self {
            epsilon: input.epsilon,
            j1: input.j1,
            j2: input.j2,
            tl: input.tl,
            tr: input.tr,
            gamma_l: input.gamma_l,
            gamma_r: input.gamma_r,
            c12: nan,
            c13: nan,
            c23: nan,
            p1: nan,
            p2: nan,
            p3: nan,
            p4: nan,
            p5: nan,
            p6: nan,
            p7: nan,
            p8: nan,
            residual: nan,
            null_gap: nan,
            singular: false,
        }
    }

    pub fn populations(&self) -> [f64; 8] {
        [
            self.p1, self.p2, self.p3, self.p4, self.p5, self.p6, self.p7, self.p8,
        ]
    }

    pub fn t_mean(&self) -> f64 {
        0.5 * (self.tl + self.tr)
    }

    pub fn delta_t(&self) -> f64 {
        self.tl - self.tr
    }

    fn numeric_fields(&self) -> [f64; 20] {
        let p = self.populations();
        [
            self.epsilon,
            self.j1,
            self.j2,
            self.tl,
            self.tr,
            self.gamma_l,
            self.gamma_r,
            self.c12,
            self.c13,
            self.c23,
            p[0],
            p[1],
            p[2],
            p[3],
            p[4],
            p[5],
            p[6],
            p[7],
            self.residual,
            self.null_gap,
        ]
    }
}

/// Solves one point and reduces the steady state to concurrences and populations.
pub fn solve_point(input: &PointInput, solver: SolverChoice) -> Result<SweepRow> {
    let inner = || -> Result<SweepRow> {
        let params = ModelParams::new(input.epsilon, input.j1, input.j2)?;
        let baths = BathSpec::new(input.tl, input.tr, input.gamma_l, input.gamma_r)?;
        let generator = crate::lindblad::liouvillian(&params, &baths)?;
        let (rho, diag) = match solver {
            SolverChoice::NullSpace => {
                steady::null_space_state(&generator, steady::DEFAULT_GAP_TOL)?
            }
            SolverChoice::Rk4 => steady::rk4_state(
                &generator,
                &DensityMatrix::maximally_mixed(),
                &Rk4Options::default(),
            )?,
            SolverChoice::Both => {
                let null = steady::null_space_state(&generator, steady::DEFAULT_GAP_TOL)?;
                let rk4 = steady::rk4_state(
                    &generator,
                    &DensityMatrix::maximally_mixed(),
                    &Rk4Options::default(),
                )?;
                let distance = null.0.trace_distance(&rk4.0)?;
                if distance > CROSS_CHECK_TOL {
                    return Err(Error::Consistency(format!(
                        "null-space and RK4 steady states differ by trace distance {distance:e}"
                    )));
                }
                null
            }
        };
        let c = pairwise_concurrences(&rho)?;
        let p = eigenstate_populations(&rho, &analytic_eigensystem(&params)).0;
        Ok(SweepRow {
            c12: c.c12,
            c13: c.c13,
            c23: c.c23,
            p1: p[0],
            p2: p[1],
            p3: p[2],
            p4: p[3],
            p5: p[4],
            p6: p[5],
            p7: p[6],
            p8: p[7],
            residual: diag.residual,
            null_gap: diag.null_gap.unwrap_or(f64::NAN),
            ..SweepRow::blank(input)
        })
    };
    inner().map_err(|e| e.at(input.to_string()))
}

/// Solves a point-mode [`SweepSpec`].
pub fn run_point(spec: &SweepSpec) -> Result<SweepRow> {
    if spec.mode != Mode::Point {
        return Err(Error::Sweep(format!(
            "run_point needs point mode, got {}",
            spec.mode
        )));
    }
    let input = spec.points()?[0];
    solve_point(&input, spec.solver)
}

/// Evaluates every grid point. Points where a Bohr frequency vanishes are kept
/// as `singular` rows; any other failure aborts the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let points = spec.points()?;
    points
        .par_iter()
        .map(|input| match solve_point(input, spec.solver) {
            Ok(row) => Ok(row),
            Err(e) if e.is_rate_singularity() => {
                log::info!("singular grid point: {e}");
                Ok(SweepRow {
                    singular: true,
                    ..SweepRow::blank(input)
                })
            }
            Err(e) => Err(e),
        })
        .collect()
}

fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{x:.16e}")
    }
}

/// Writes rows as CSV (17 significant digits) or as a JSON array of records.
pub fn write_rows<W: Write>(rows: &[SweepRow], format: Format, writer: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Sweep("nothing to emit".into()));
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(COLUMNS)?;
            for row in rows {
                let mut record: Vec<String> = row
                    .numeric_fields()
                    .iter()
                    .map(|&x| format_number(x))
                    .collect();
                record.push(row.singular.to_string());
                w.write_record(&record)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut w = writer;
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn emit(rows: &[SweepRow], format: Format, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    write_rows(rows, format, &mut writer)?;
    writer.flush()?;
    Ok(())
}

/// Parses rows written by [`write_rows`].
pub fn read_rows(text: &str, format: Format) -> Result<Vec<SweepRow>> {
    match format {
        Format::Json => Ok(serde_json::from_str(text)?),
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            Ok(reader
                .deserialize()
                .collect::<std::result::Result<_, _>>()?)
        }
    }
}
