//! Frequency-colored phase diagrams: SVG rendering and CSV matrices.
//!
//! A cell's color encodes the fraction `f` of trials in which the behavior
//! appeared. A clear majority either way is shaded toward the success or
//! failure hue, linearly in `|f − 0.5|`; an exact tie is white.

use std::fmt::{self, Write as _};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::Behavior;
use crate::sweep::{Axis, AxisName, CellsReport, PhaseCell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const WHITE: Rgb = Rgb(255, 255, 255);
    pub const GREEN: Rgb = Rgb(0, 150, 0);
    pub const RED: Rgb = Rgb(200, 0, 0);
    pub const ORANGE: Rgb = Rgb(240, 130, 0);
    pub const BLUE: Rgb = Rgb(0, 90, 200);

    /// Mixes white toward `self`; `weight` 0 gives white, 1 gives `self`.
    pub fn from_white(self, weight: f64) -> Rgb {
        let w = weight.clamp(0.0, 1.0);
        let mix = |c: u8| (255.0 + (c as f64 - 255.0) * w).round() as u8;
        Rgb(mix(self.0), mix(self.1), mix(self.2))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("palette", format!("unknown color `{s}`"));
        match s.trim().to_ascii_lowercase().as_str() {
            "green" => Ok(Rgb::GREEN),
            "red" => Ok(Rgb::RED),
            "orange" => Ok(Rgb::ORANGE),
            "blue" => Ok(Rgb::BLUE),
            "white" => Ok(Rgb::WHITE),
            hex => {
                let digits = hex.strip_prefix('#').ok_or_else(bad)?;
                if digits.len() != 6 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
                    return Err(bad());
                }
                let byte = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).map_err(|_| bad());
                Ok(Rgb(byte(0)?, byte(2)?, byte(4)?))
            }
        }
    }
}

/// Hues for behavior-present and behavior-absent majorities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorRule {
    pub success: Rgb,
    pub failure: Rgb,
    pub tie: Rgb,
}

impl ColorRule {
    pub fn new(success: Rgb, failure: Rgb) -> Self {
        ColorRule {
            success,
            failure,
            tie: Rgb::WHITE,
        }
    }

    /// Green/red for milling, green/orange for diffusion.
    pub fn for_behavior(behavior: Behavior) -> Self {
        match behavior {
            Behavior::Milling => ColorRule::new(Rgb::GREEN, Rgb::RED),
            Behavior::Diffusion => ColorRule::new(Rgb::GREEN, Rgb::ORANGE),
        }
    }

    /// Parses `success/failure`, e.g. `green/red` or `#0000ff/#ff8800`.
    pub fn parse(palette: &str) -> Result<Self> {
        let (s, f) = palette.split_once('/').ok_or_else(|| {
            Error::invalid(
                "palette",
                format!("expected `success/failure`, got `{palette}`"),
            )
        })?;
        Ok(ColorRule::new(s.parse()?, f.parse()?))
    }
}

impl fmt::Display for ColorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.success, self.failure)
    }
}

/// `(f − 0.5) / 0.5` for `f = successes / trials`: +1 all success, −1 all
/// failure, 0 a tie.
pub fn signed_intensity(successes: usize, trials: usize) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Usage("a cell needs at least one trial".into()));
    }
    if successes > trials {
        return Err(Error::Usage(format!(
            "{successes} successes out of {trials} trials"
        )));
    }
    // integer form keeps exact ties exact
    Ok((2 * successes as i64 - trials as i64) as f64 / trials as f64)
}

pub fn color_for(successes: usize, trials: usize, rule: &ColorRule) -> Result<Rgb> {
    let s = signed_intensity(successes, trials)?;
    Ok(if s > 0.0 {
        rule.success.from_white(s)
    } else if s < 0.0 {
        rule.failure.from_white(-s)
    } else {
        rule.tie
    })
}

/// A two-axis grid of cells; `cells[j][i]` sits at `(x[i], y[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub cells: Vec<Vec<PhaseCell>>,
    pub behavior: Behavior,
    pub palette: ColorRule,
    /// Parameters held fixed across the slice, as `name = value unit`, for the title.
    pub fixed: Vec<String>,
    /// Free text embedded as the SVG `<desc>`, e.g. the generating config.
    pub description: Option<String>,
}

impl PhaseDiagram {
    pub fn new(
        x_axis: Axis,
        y_axis: Axis,
        cells: Vec<Vec<PhaseCell>>,
        behavior: Behavior,
        palette: ColorRule,
    ) -> Result<Self> {
        let d = PhaseDiagram {
            x_axis,
            y_axis,
            cells,
            behavior,
            palette,
            fixed: Vec::new(),
            description: None,
        };
        d.validate()?;
        Ok(d)
    }

    /// Builds the diagram of a two-axis sweep: first axis horizontal.
    pub fn from_report(report: &CellsReport, palette: ColorRule) -> Result<Self> {
        if report.axes.len() != 2 {
            return Err(Error::Usage(format!(
                "a phase diagram needs exactly 2 axes, the sweep has {}; use the CSV-only export",
                report.axes.len()
            )));
        }
        let (x, y) = (report.axes[0].clone(), report.axes[1].clone());
        if report.cells.len() != x.values.len() * y.values.len() {
            return Err(Error::Usage(format!(
                "{} cells for a {}x{} grid",
                report.cells.len(),
                x.values.len(),
                y.values.len()
            )));
        }
        let mut sorted = report.cells.clone();
        sorted.sort_by_key(|c| c.point);
        let ny = y.values.len();
        let cells = (0..ny)
            .map(|j| {
                (0..x.values.len())
                    .map(|i| sorted[i * ny + j].clone())
                    .collect()
            })
            .collect();
        let mut d = PhaseDiagram::new(x, y, cells, report.behavior, palette)?;
        d.fixed = fixed_parameters(report, &[d.x_axis.name, d.y_axis.name]);
        d.description = serde_json::to_string(&report.grid).ok();
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_axis.values.is_empty() || self.y_axis.values.is_empty() {
            return Err(Error::Usage("phase diagram axes must not be empty".into()));
        }
        if self.cells.len() != self.y_axis.values.len()
            || self.cells.iter().any(|row| row.len() != self.x_axis.values.len())
        {
            return Err(Error::Usage(format!(
                "cell matrix does not match {}x{} axes",
                self.x_axis.values.len(),
                self.y_axis.values.len()
            )));
        }
        for cell in self.cells.iter().flatten() {
            signed_intensity(cell.successes, cell.trials)?;
        }
        Ok(())
    }

    pub fn title(&self) -> String {
        let mut t = format!("{} frequency", capitalized(self.behavior));
        if !self.fixed.is_empty() {
            t.push_str(" at ");
            t.push_str(&self.fixed.join(", "));
        }
        t
    }

    /// Standalone SVG; identical diagrams give identical bytes.
    pub fn to_svg(&self) -> Result<String> {
        self.validate()?;
        const CW: usize = 44;
        const CH: usize = 28;
        const LEFT: usize = 90;
        const TOP: usize = 50;
        let nx = self.x_axis.values.len();
        let ny = self.y_axis.values.len();
        let plot_w = CW * nx;
        let plot_h = CH * ny;
        let legend_x = LEFT + plot_w + 30;
        let legend_steps = 11;
        let width = legend_x + 110;
        let height = (TOP + plot_h + 70).max(TOP + legend_steps * 18 + 40);

        let mut s = String::new();
        let w = &mut s;
        // writing to a String cannot fail
        let _ = writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
        );
        if let Some(desc) = &self.description {
            let _ = writeln!(w, "<desc>{}</desc>", escape(desc));
        }
        let _ = writeln!(w, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
        let _ = writeln!(
            w,
            r#"<text class="title" x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            width / 2,
            escape(&self.title())
        );

        for (j, row) in self.cells.iter().enumerate() {
            // first y value at the bottom
            let y = TOP + (ny - 1 - j) * CH;
            for (i, cell) in row.iter().enumerate() {
                let x = LEFT + i * CW;
                let color = color_for(cell.successes, cell.trials, &self.palette)?;
                let _ = writeln!(
                    w,
                    r#"<rect class="cell" x="{x}" y="{y}" width="{CW}" height="{CH}" fill="{color}" stroke="gray" stroke-width="0.5"><title>{}/{}</title></rect>"#,
                    cell.successes, cell.trials
                );
            }
        }

        for (i, v) in self.x_axis.values.iter().enumerate() {
            let _ = writeln!(
                w,
                r#"<text class="tick x-tick" x="{}" y="{}" text-anchor="middle">{}</text>"#,
                LEFT + i * CW + CW / 2,
                TOP + plot_h + 16,
                fmt_num(*v)
            );
        }
        for (j, v) in self.y_axis.values.iter().enumerate() {
            let _ = writeln!(
                w,
                r#"<text class="tick y-tick" x="{}" y="{}" text-anchor="end">{}</text>"#,
                LEFT - 6,
                TOP + (ny - 1 - j) * CH + CH / 2 + 4,
                fmt_num(*v)
            );
        }
        let _ = writeln!(
            w,
            r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2,
            TOP + plot_h + 38,
            escape(self.x_axis.name.label())
        );
        let _ = writeln!(
            w,
            r#"<text class="axis-label" x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            TOP + plot_h / 2,
            escape(self.y_axis.name.label())
        );

        let _ = writeln!(
            w,
            r#"<text class="legend-title" x="{legend_x}" y="{}">{} in k/10 trials</text>"#,
            TOP - 8,
            capitalized(self.behavior)
        );
        for k in 0..legend_steps {
            let successes = legend_steps - 1 - k;
            let color = color_for(successes, legend_steps - 1, &self.palette)?;
            let y = TOP + k * 18;
            let _ = writeln!(
                w,
                r#"<rect class="legend" x="{legend_x}" y="{y}" width="16" height="14" fill="{color}" stroke="gray" stroke-width="0.5"/>"#
            );
            let _ = writeln!(
                w,
                r#"<text class="legend-label" x="{}" y="{}">{successes}/{}</text>"#,
                legend_x + 22,
                y + 11,
                legend_steps - 1
            );
        }
        let _ = writeln!(w, "</svg>");
        Ok(s)
    }

    pub fn render(&self, path: &Path) -> Result<()> {
        let svg = self.to_svg()?;
        fs::write(path, svg)?;
        Ok(())
    }

    /// CSV matrix: header row holds x values, first column y values, body
    /// the success fractions to 3 decimals.
    pub fn write_matrix<W: Write>(&self, mut out: W) -> Result<()> {
        self.validate()?;
        write!(out, "{}\\{}", self.y_axis.name, self.x_axis.name)?;
        for v in &self.x_axis.values {
            write!(out, ",{}", fmt_num(*v))?;
        }
        writeln!(out)?;
        for (j, row) in self.cells.iter().enumerate() {
            write!(out, "{}", fmt_num(self.y_axis.values[j]))?;
            for cell in row {
                write!(out, ",{:.3}", cell.fraction())?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn export_matrix(&self, path: &Path) -> Result<()> {
        self.validate()?;
        self.write_matrix(BufWriter::new(File::create(path)?))
    }
}

/// A CSV matrix read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionMatrix {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// `fractions[j][i]` at `(x[i], y[j])`.
    pub fractions: Vec<Vec<f64>>,
}

pub fn read_matrix(path: &Path) -> Result<FractionMatrix> {
    let reader = BufReader::new(File::open(path)?);
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let num = |line: usize, s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| err(line, format!("bad number `{s}`: {e}")))
    };
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty file".into()))??;
    let x_values = header
        .split(',')
        .skip(1)
        .map(|s| num(1, s))
        .collect::<Result<Vec<_>>>()?;
    let mut y_values = Vec::new();
    let mut fractions = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        y_values.push(num(lineno, fields.next().unwrap_or(""))?);
        let row = fields.map(|s| num(lineno, s)).collect::<Result<Vec<_>>>()?;
        if row.len() != x_values.len() {
            return Err(err(
                lineno,
                format!("{} values, expected {}", row.len(), x_values.len()),
            ));
        }
        fractions.push(row);
    }
    Ok(FractionMatrix {
        x_values,
        y_values,
        fractions,
    })
}

/// CSV export for sweeps of any dimension: one row per point with its
/// coordinates, counts and fraction.
pub fn write_cells_csv<W: Write>(report: &CellsReport, mut out: W) -> Result<()> {
    if report.axes.is_empty() {
        return Err(Error::Usage("sweep has no axes".into()));
    }
    let names: Vec<String> = report.axes.iter().map(|a| a.name.to_string()).collect();
    writeln!(out, "{},trials,successes,fraction", names.join(","))?;
    let mut cells: Vec<&PhaseCell> = report.cells.iter().collect();
    cells.sort_by_key(|c| c.point);
    for c in cells {
        for name in &names {
            let v = c.coords.get(name).ok_or_else(|| {
                Error::Usage(format!("cell {} lacks coordinate `{name}`", c.point))
            })?;
            write!(out, "{},", fmt_num(*v))?;
        }
        signed_intensity(c.successes, c.trials)?;
        writeln!(out, "{},{},{:.3}", c.trials, c.successes, c.fraction())?;
    }
    out.flush()?;
    Ok(())
}

fn fixed_parameters(report: &CellsReport, swept: &[AxisName]) -> Vec<String> {
    let p = &report.grid.base_params;
    [
        (AxisName::N, format!("N = {}", p.n)),
        (AxisName::Speed, format!("v = {} m/s", fmt_num(p.v))),
        (AxisName::TurnRate, format!("omega = {} deg/s", fmt_num(p.omega_deg))),
        (AxisName::Range, format!("gamma = {} m", fmt_num(p.gamma))),
        (AxisName::Opening, format!("phi = {} deg", fmt_num(p.phi_deg))),
    ]
    .into_iter()
    .filter(|(name, _)| !swept.contains(name))
    .map(|(_, text)| text)
    .collect()
}

fn capitalized(b: Behavior) -> String {
    let s = b.to_string();
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => s,
    }
}

/// Shortest of `{}` and 6 significant decimals, so 50 prints as `50` and
/// 0.1 + 0.2 as `0.3`.
fn fmt_num(v: f64) -> String {
    let short = format!("{v}");
    let rounded = format!("{v:.6}");
    let trimmed = rounded.trim_end_matches('0').trim_end_matches('.');
    if short.len() <= trimmed.len() {
        short
    } else {
        trimmed.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
