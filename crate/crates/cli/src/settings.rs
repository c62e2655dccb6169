//! Flag and config-file settings, and their reduction to a [`SweepSpec`].

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use ness_core::sweep::{Axis, AxisName, Mode};
use ness_core::{Format, Preset, SolverChoice, SweepSpec};

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Settings {
    /// Named parameter set (fig2, fig3, fig4, fig5, fig5-sym, fig6)
    #[arg(long, value_name = "NAME")]
    pub preset: Option<Preset>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tl: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tr: Option<f64>,
    /// Mean temperature (tl + tr) / 2
    #[arg(long, allow_hyphen_values = true)]
    pub tm: Option<f64>,
    /// Temperature difference tl - tr
    #[arg(long = "delta-t", allow_hyphen_values = true)]
    pub delta_t: Option<f64>,
    #[arg(long = "gamma-l", allow_hyphen_values = true)]
    pub gamma_l: Option<f64>,
    #[arg(long = "gamma-r", allow_hyphen_values = true)]
    pub gamma_r: Option<f64>,
    /// null-space, rk4 or both
    #[arg(long)]
    pub solver: Option<SolverChoice>,
    /// Grid axis as NAME:MIN:MAX:COUNT or dt:auto:COUNT, at most twice
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub grid: Vec<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_value<T>(key: &str, value: &str) -> Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("invalid value `{value}` for {key}: {e}"))
}

impl Settings {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
            let value = value.trim().trim_matches('"');
            s.set(key.trim(), value)
                .with_context(|| format!("line {}", n + 1))?;
        }
        Ok(s)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_config_str(&text).with_context(|| format!("in config {}", path.display()))
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('_', "-");
        match key.as_str() {
            "preset" => self.preset = Some(parse_value(&key, value)?),
            "epsilon" => self.epsilon = Some(parse_value(&key, value)?),
            "j1" => self.j1 = Some(parse_value(&key, value)?),
            "j2" => self.j2 = Some(parse_value(&key, value)?),
            "tl" => self.tl = Some(parse_value(&key, value)?),
            "tr" => self.tr = Some(parse_value(&key, value)?),
            "tm" => self.tm = Some(parse_value(&key, value)?),
            "delta-t" => self.delta_t = Some(parse_value(&key, value)?),
            "gamma-l" => self.gamma_l = Some(parse_value(&key, value)?),
            "gamma-r" => self.gamma_r = Some(parse_value(&key, value)?),
            "solver" => self.solver = Some(parse_value(&key, value)?),
            "grid" => self.grid.push(value.to_string()),
            "format" => self.format = Some(parse_value(&key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => bail!("unknown key `{key}`"),
        }
        Ok(())
    }

    /// `over` wins wherever it is set. Grids are replaced as a whole.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            preset: over.preset.or(self.preset),
            epsilon: over.epsilon.or(self.epsilon),
            j1: over.j1.or(self.j1),
            j2: over.j2.or(self.j2),
            tl: over.tl.or(self.tl),
            tr: over.tr.or(self.tr),
            tm: over.tm.or(self.tm),
            delta_t: over.delta_t.or(self.delta_t),
            gamma_l: over.gamma_l.or(self.gamma_l),
            gamma_r: over.gamma_r.or(self.gamma_r),
            solver: over.solver.or(self.solver),
            grid: if over.grid.is_empty() {
                self.grid
            } else {
                over.grid
            },
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }

    fn fixed(&self, name: AxisName) -> Option<f64> {
        match name {
            AxisName::Tl => self.tl,
            AxisName::Tr => self.tr,
            AxisName::Tm => self.tm,
            AxisName::Dt => self.delta_t,
            AxisName::J1 => self.j1,
            AxisName::J2 => self.j2,
        }
    }

    pub fn into_spec(self, point: bool) -> Result<SweepSpec> {
        let mut spec = self.preset.map(Preset::spec).unwrap_or_default();
        if !self.grid.is_empty() {
            spec.axes = self
                .grid
                .iter()
                .map(|g| Axis::parse(g))
                .collect::<ness_core::Result<_>>()?;
        }
        if point {
            if !self.grid.is_empty() {
                bail!("point takes no --grid");
            }
            spec.axes.clear();
            spec.mode = Mode::Point;
        } else {
            if spec.axes.is_empty() {
                bail!("sweep needs --grid or --preset");
            }
            spec.mode = infer_mode(&spec.axes)?;
        }
        for axis in &spec.axes {
            if self.fixed(axis.name).is_some() {
                bail!(
                    "{} is swept by the grid and cannot also be fixed",
                    axis.name
                );
            }
        }
        if let Some(v) = self.epsilon {
            spec.epsilon = v;
        }
        if let Some(v) = self.j1 {
            spec.j1 = v;
        }
        if let Some(v) = self.j2 {
            spec.j2 = v;
        }
        if self.tl.is_some() || self.tr.is_some() {
            spec.tl = self.tl.or(spec.tl);
            spec.tr = self.tr.or(spec.tr);
        }
        if self.tm.is_some() || self.delta_t.is_some() {
            spec.tm = self.tm.or(spec.tm);
            spec.dt = self.delta_t.or(spec.dt);
            if self.tl.is_none() && self.tr.is_none() {
                spec.tl = None;
                spec.tr = None;
            }
        }
        if let Some(v) = self.gamma_l {
            spec.gamma_l = v;
        }
        if let Some(v) = self.gamma_r {
            spec.gamma_r = v;
        }
        if let Some(v) = self.solver {
            spec.solver = v;
        }
        if let Some(v) = self.format {
            spec.format = v;
        }
        Ok(spec)
    }
}

fn infer_mode(axes: &[Axis]) -> Result<Mode> {
    let of = |name| match name {
        AxisName::Tl | AxisName::Tr => Mode::TempGrid,
        AxisName::Tm | AxisName::Dt => Mode::TmDtGrid,
        AxisName::J1 | AxisName::J2 => Mode::CouplingGrid,
    };
    let mode = of(axes[0].name);
    if axes.iter().any(|a| of(a.name) != mode) {
        bail!(
            "grid axes {} cannot be combined",
            axes.iter()
                .map(|a| a.name.to_string())
                .collect::<Vec<_>>()
                .join(" and ")
        );
    }
    Ok(mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let s = Settings::from_config_str(
            "# run\nepsilon = 3\n\nj1=0.5  # weak\ngamma_l = 0.1\ngrid = tm:0.2:1:5\ngrid = dt:auto:11\nformat = \"json\"\n",
        )
        .unwrap();
        assert_eq!(s.epsilon, Some(3.0));
        assert_eq!(s.j1, Some(0.5));
        assert_eq!(s.gamma_l, Some(0.1));
        assert_eq!(s.grid, vec!["tm:0.2:1:5", "dt:auto:11"]);
        assert_eq!(s.format, Some(Format::Json));
    }

    #[test]
    fn config_errors_name_the_line() {
        let err = Settings::from_config_str("epsilon = 1\nspin = 2\n").unwrap_err();
        assert!(format!("{err:#}").contains("line 2"));
        assert!(Settings::from_config_str("epsilon 1").is_err());
        assert!(Settings::from_config_str("epsilon = one").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file =
            Settings::from_config_str("epsilon = 3\nj1 = 0.5\ngrid = tl:0.1:1:3\nsolver = rk4\n")
                .unwrap();
        let flags = Settings {
            epsilon: Some(1.0),
            grid: vec!["j1:0.1:1:3".into()],
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.epsilon, Some(1.0));
        assert_eq!(merged.j1, Some(0.5));
        assert_eq!(merged.grid, vec!["j1:0.1:1:3"]);
        assert_eq!(merged.solver, Some(SolverChoice::Rk4));
    }

    #[test]
    fn preset_then_overrides() {
        let s = Settings {
            preset: Some(Preset::Fig6),
            epsilon: Some(2.0),
            ..Default::default()
        };
        let spec = s.into_spec(false).unwrap();
        assert_eq!(spec.mode, Mode::CouplingGrid);
        assert_eq!(spec.epsilon, 2.0);
        assert_eq!(spec.dt, Some(-0.4));

        let clash = Settings {
            preset: Some(Preset::Fig6),
            j1: Some(1.0),
            ..Default::default()
        };
        assert!(clash.into_spec(false).is_err());
    }

    #[test]
    fn mode_follows_axes() {
        let s = Settings {
            grid: vec!["tm:0.2:1:3".into(), "dt:auto:5".into()],
            ..Default::default()
        };
        assert_eq!(s.into_spec(false).unwrap().mode, Mode::TmDtGrid);
        let mixed = Settings {
            grid: vec!["tl:0.2:1:3".into(), "j1:0.1:1:3".into()],
            ..Default::default()
        };
        assert!(mixed.into_spec(false).is_err());
        assert!(Settings::default().into_spec(false).is_err());
    }

    #[test]
    fn point_temperatures() {
        let s = Settings {
            tm: Some(0.4),
            delta_t: Some(-0.2),
            ..Default::default()
        };
        let spec = s.into_spec(true).unwrap();
        let p = spec.points().unwrap();
        assert!((p[0].tl - 0.3).abs() < 1e-15 && (p[0].tr - 0.5).abs() < 1e-15);
        let grid = Settings {
            grid: vec!["tl:0.1:1:3".into()],
            ..Default::default()
        };
        assert!(grid.into_spec(true).is_err());
    }
}
