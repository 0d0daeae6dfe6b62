//! Parameter-sweep grids, CSV emission, and extremum location.
//!
//! Two grid families cover the figure data: correlations of the apparatus
//! state over (R, kappa_h) at fixed kappa_v, and the advantage of the
//! quasi-optimal encoding over (R, p1). Rows are emitted row-major over
//! (axis1, axis2) with nine significant digits, so repeated runs are
//! byte-identical.
//!
//! Extremum helpers return the best grid point refined by golden-section
//! along each axis; the interesting peaks of this family sit on branch
//! kinks and region boundaries, which a bare grid cannot localize to the
//! requested 1e-3.

use crate::correlations::{classical_information_closed, discord_closed, Branch};
use crate::error::{Error, Result};
use crate::protocol::{advantage_with, AdvantageReport, EncodingDistribution, MeasurementSearch};
use crate::xstate::{entanglement_of_formation, prepared_state, ApparatusParams, XStateParams};
use serde::Serialize;
use std::io::{self, Write};

/// A sweepable parameter with its legal domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    /// Beam-splitter reflection coefficient R in [0, 1].
    Reflection,
    /// Horizontal coherence factor kappa_h in [0, 1].
    KappaH,
    /// Quasi-optimal encoding weight p1 in [0, 1/2].
    P1,
}

impl SweepParam {
    fn domain(&self) -> (f64, f64) {
        match self {
            SweepParam::Reflection | SweepParam::KappaH => (0.0, 1.0),
            SweepParam::P1 => (0.0, 0.5),
        }
    }
}

/// One sweep axis: a parameter, an inclusive range, and a point count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, points: usize) -> Result<Self> {
        let (lo, hi) = param.domain();
        if !(lo <= min && min <= max && max <= hi) {
            return Err(Error::InvalidParams {
                reason: format!("axis range [{min}, {max}] outside [{lo}, {hi}] for {param:?}"),
            });
        }
        if points < 2 {
            return Err(Error::InvalidParams {
                reason: format!("axis needs at least 2 points, got {points}"),
            });
        }
        Ok(Self { param, min, max, points })
    }

    /// The whole legal domain at the given resolution.
    pub fn full(param: SweepParam, points: usize) -> Result<Self> {
        let (lo, hi) = param.domain();
        Self::new(param, lo, hi, points)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }
}

/// A two-axis sweep description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Axis,
}

impl SweepSpec {
    pub fn new(axis1: Axis, axis2: Axis) -> Self {
        Self { axis1, axis2 }
    }

    /// Default full-domain grid for the apparatus sweep: 201x201 over
    /// (R, kappa_h).
    pub fn prepared_default() -> Self {
        Self {
            axis1: Axis::full(SweepParam::Reflection, 201).expect("static axis"),
            axis2: Axis::full(SweepParam::KappaH, 201).expect("static axis"),
        }
    }

    /// Default full-domain grid for the advantage sweep: 201x201 over
    /// (R, p1).
    pub fn advantage_default() -> Self {
        Self {
            axis1: Axis::full(SweepParam::Reflection, 201).expect("static axis"),
            axis2: Axis::full(SweepParam::P1, 201).expect("static axis"),
        }
    }
}

/// One grid point of the apparatus-correlations sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrepRow {
    pub r: f64,
    pub kappa_h: f64,
    pub c: f64,
    pub e: f64,
    pub d: f64,
    pub i: f64,
    pub j: f64,
    pub branch: Branch,
}

/// Correlations of the apparatus state over an (R, kappa_h) grid at fixed
/// kappa_v, via the closed forms of the family.
pub fn sweep_prepared(spec: &SweepSpec, kappa_v: f64) -> Result<Vec<PrepRow>> {
    if spec.axis1.param != SweepParam::Reflection || spec.axis2.param != SweepParam::KappaH {
        return Err(Error::InvalidParams {
            reason: "apparatus sweep expects axis1 = R, axis2 = kappa_h".into(),
        });
    }
    if !(0.0..=1.0).contains(&kappa_v) {
        return Err(Error::InvalidParams {
            reason: format!("kappa_v = {kappa_v} outside [0, 1]"),
        });
    }
    let mut rows = Vec::with_capacity(spec.axis1.points * spec.axis2.points);
    for r in spec.axis1.values() {
        for kappa_h in spec.axis2.values() {
            let params = ApparatusParams::new(r, kappa_h, kappa_v)?.canonical_params();
            rows.push(prep_row(r, kappa_h, &params)?);
        }
    }
    Ok(rows)
}

fn prep_row(r: f64, kappa_h: f64, params: &XStateParams) -> Result<PrepRow> {
    let (d, diag) = discord_closed(params);
    let c = params.concurrence();
    // Marginals of the family are maximally mixed, so I = 2 - S.
    let i = (2.0 - params.entropy()).clamp(0.0, 2.0);
    Ok(PrepRow {
        r,
        kappa_h,
        c,
        e: entanglement_of_formation(c)?,
        d,
        i,
        j: classical_information_closed(params),
        branch: diag.branch,
    })
}

/// One grid point of the quasi-optimal advantage sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageRow {
    pub r: f64,
    pub p1: f64,
    pub i_q: f64,
    pub i_c: f64,
    pub d_i: f64,
    pub d_d: f64,
    pub j_after: f64,
    pub branch: Branch,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

impl AdvantageRow {
    fn from_report(r: f64, p1: f64, rep: &AdvantageReport) -> Self {
        Self {
            r,
            p1,
            i_q: rep.i_q,
            i_c: rep.i_c,
            d_i: rep.delta_i,
            d_d: rep.delta_d,
            j_after: rep.j_after,
            branch: rep.ic_branch,
            lower_slack: rep.lower_slack,
            upper_slack: rep.upper_slack,
        }
    }
}

/// Quantum advantage of the quasi-optimal encoding over an (R, p1) grid.
/// The accessible-information search is restricted to the Pauli axes,
/// which the full search validates as exact on this family.
pub fn sweep_advantage(spec: &SweepSpec) -> Result<Vec<AdvantageRow>> {
    if spec.axis1.param != SweepParam::Reflection || spec.axis2.param != SweepParam::P1 {
        return Err(Error::InvalidParams {
            reason: "advantage sweep expects axis1 = R, axis2 = p1".into(),
        });
    }
    let mut rows = Vec::with_capacity(spec.axis1.points * spec.axis2.points);
    for r in spec.axis1.values() {
        let rho = prepared_state(r)?;
        for p1 in spec.axis2.values() {
            let dist = EncodingDistribution::quasi_optimal(p1.min(0.5))?;
            let rep = advantage_with(&rho, &dist, MeasurementSearch::Axes)?;
            rows.push(AdvantageRow::from_report(r, p1, &rep));
        }
    }
    Ok(rows)
}

/// One point of a fixed-p1 advantage cut over R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutRow {
    pub r: f64,
    /// Pre-encoding concurrence of the prepared state.
    pub c: f64,
    /// Pre-encoding discord of the prepared state.
    pub d: f64,
    pub d_i: f64,
}

/// Advantage of the quasi-optimal encoding at fixed `p1` along an R axis,
/// next to the pre-encoding concurrence and discord of the prepared
/// state.
pub fn advantage_cut(p1: f64, axis: &Axis) -> Result<Vec<CutRow>> {
    if axis.param != SweepParam::Reflection {
        return Err(Error::InvalidParams {
            reason: "cut expects an R axis".into(),
        });
    }
    let dist = EncodingDistribution::quasi_optimal(p1)?;
    axis.values()
        .into_iter()
        .map(|r| {
            let rho = prepared_state(r)?;
            let params = ApparatusParams::new(r, 1.0, 0.0)?.canonical_params();
            let rep = advantage_with(&rho, &dist, MeasurementSearch::Axes)?;
            Ok(CutRow {
                r,
                c: params.concurrence(),
                d: discord_closed(&params).0,
                d_i: rep.delta_i,
            })
        })
        .collect()
}

/// Nine significant digits, stable across runs.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn write_prep_csv(rows: &[PrepRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "R,kappa_h,C,E,D,I,J,branch")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_sig(row.r),
            fmt_sig(row.kappa_h),
            fmt_sig(row.c),
            fmt_sig(row.e),
            fmt_sig(row.d),
            fmt_sig(row.i),
            fmt_sig(row.j),
            row.branch
        )?;
    }
    Ok(())
}

pub fn write_advantage_csv(rows: &[AdvantageRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "R,p1,Iq,Ic,dI,dD,J_after,branch,lower_slack,upper_slack")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_sig(row.r),
            fmt_sig(row.p1),
            fmt_sig(row.i_q),
            fmt_sig(row.i_c),
            fmt_sig(row.d_i),
            fmt_sig(row.d_d),
            fmt_sig(row.j_after),
            row.branch,
            fmt_sig(row.lower_slack),
            fmt_sig(row.upper_slack)
        )?;
    }
    Ok(())
}

pub fn write_cut_csv(rows: &[CutRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "R,C,D,dI")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_sig(row.r),
            fmt_sig(row.c),
            fmt_sig(row.d),
            fmt_sig(row.d_i)
        )?;
    }
    Ok(())
}

/// A polyline in the (kappa_h, R) plane.
pub type Polyline = Vec<(f64, f64)>;

/// Writes a two-column polyline CSV.
pub fn write_polyline_csv(
    header: (&str, &str),
    line: &Polyline,
    mut w: impl Write,
) -> io::Result<()> {
    writeln!(w, "{},{}", header.0, header.1)?;
    for (x, y) in line {
        writeln!(w, "{},{}", fmt_sig(*x), fmt_sig(*y))?;
    }
    Ok(())
}

/// The concurrence-zero boundary `(1 + kappa_h) R = 1` as (kappa_h, R)
/// points (kappa_v = 0 family).
pub fn concurrence_zero_boundary(points: usize) -> Polyline {
    line_over_kappa(points, |kh| 1.0 / (1.0 + kh))
}

/// The Werner line `R = 1/(2 - kappa_h)`, where sigma_Z and sigma_X tie.
pub fn werner_line(points: usize) -> Polyline {
    line_over_kappa(points, |kh| 1.0 / (2.0 - kh))
}

/// The Werner-like line `R = 1/(2 + kappa_h)`, the other degenerate set.
pub fn werner_like_line(points: usize) -> Polyline {
    line_over_kappa(points, |kh| 1.0 / (2.0 + kh))
}

fn line_over_kappa(points: usize, f: impl Fn(f64) -> f64) -> Polyline {
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let kh = i as f64 / (n - 1) as f64;
            (kh, f(kh))
        })
        .collect()
}

/// Where the optimal measurement for the accessible information flips
/// between sigma_Z and sigma_X on an advantage grid: midpoints of
/// adjacent grid cells whose branches differ, as (R, p1) points.
pub fn branch_switch_boundary(rows: &[AdvantageRow], spec: &SweepSpec) -> Polyline {
    let n2 = spec.axis2.points;
    let mut line = Vec::new();
    for chunk in rows.chunks(n2) {
        for pair in chunk.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let flip = matches!(
                (a.branch, b.branch),
                (Branch::Z, Branch::X) | (Branch::X, Branch::Z)
            );
            if flip {
                line.push((a.r, 0.5 * (a.p1 + b.p1)));
            }
        }
    }
    line
}

/// A located extremum: grid point plus golden-section refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub at: (f64, f64),
}

const REFINE_TOL: f64 = 1e-12;

/// Golden-section maximizer on [lo, hi].
fn golden_max(mut lo: f64, mut hi: f64, f: &mut impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > REFINE_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

/// Maximum discord over the zero-concurrence region of the (R, kappa_h)
/// plane at kappa_v = 0: best grid point, then alternating golden-section
/// refinement along each axis constrained to C = 0. Points with any
/// concurrence score negative infinity.
pub fn peak_discord_without_concurrence(spec: &SweepSpec) -> Result<Extremum> {
    let objective = |r: f64, kh: f64| -> f64 {
        let params = ApparatusParams::new(r.clamp(0.0, 1.0), kh.clamp(0.0, 1.0), 0.0)
            .expect("clamped into domain")
            .canonical_params();
        if params.concurrence() > 0.0 {
            return f64::NEG_INFINITY;
        }
        discord_closed(&params).0
    };

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for r in spec.axis1.values() {
        for kh in spec.axis2.values() {
            let d = objective(r, kh);
            if d > best.0 {
                best = (d, r, kh);
            }
        }
    }

    let (step1, step2) = (spec.axis1.step(), spec.axis2.step());
    let (mut r, mut kh) = (best.1, best.2);
    for _ in 0..3 {
        let (r_new, _) = golden_max(
            (r - step1).max(spec.axis1.min),
            (r + step1).min(spec.axis1.max),
            &mut |x| objective(x, kh),
        );
        r = r_new;
        let (kh_new, _) = golden_max(
            (kh - step2).max(spec.axis2.min),
            (kh + step2).min(spec.axis2.max),
            &mut |x| objective(r, x),
        );
        kh = kh_new;
    }
    let refined = objective(r, kh);
    Ok(if refined >= best.0 {
        Extremum { value: refined, at: (r, kh) }
    } else {
        Extremum { value: best.0, at: (best.1, best.2) }
    })
}

/// Maximum advantage along a fixed-p1 cut, restricted to zero
/// pre-encoding concurrence (R <= 1/2 on the prepared family), with
/// golden-section refinement around the best grid point.
pub fn peak_cut_advantage_without_entanglement(p1: f64, axis: &Axis) -> Result<Extremum> {
    let dist = EncodingDistribution::quasi_optimal(p1)?;
    let objective = |r: f64| -> f64 {
        let r = r.clamp(0.0, 1.0);
        let c_pre = (2.0 * r - 1.0).max(0.0);
        if c_pre > 0.0 {
            return f64::NEG_INFINITY;
        }
        advantage_with(&prepared_state(r).expect("clamped"), &dist, MeasurementSearch::Axes)
            .expect("prepared states are symmetric X-states")
            .delta_i
    };

    let mut best = (f64::NEG_INFINITY, 0.0);
    for r in axis.values() {
        let d = objective(r);
        if d > best.0 {
            best = (d, r);
        }
    }
    let step = axis.step();
    let (r, value) = golden_max(
        (best.1 - step).max(axis.min),
        (best.1 + step).min(axis.max),
        &mut |x| objective(x),
    );
    Ok(if value >= best.0 {
        Extremum { value, at: (r, p1) }
    } else {
        Extremum { value: best.0, at: (best.1, p1) }
    })
}

/// Grid maximum of the advantage over full sweep rows, optionally
/// restricted to rows with zero pre-encoding concurrence.
pub fn peak_advantage(rows: &[AdvantageRow], require_zero_concurrence: bool) -> Option<Extremum> {
    rows.iter()
        .filter(|row| !require_zero_concurrence || 2.0 * row.r - 1.0 <= 0.0)
        .max_by(|a, b| a.d_i.partial_cmp(&b.d_i).unwrap())
        .map(|row| Extremum {
            value: row.d_i,
            at: (row.r, row.p1),
        })
}
