use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use bellcat_core::scs::UNDERFLOW_GUARD;
use bellcat_core::{
    builtin_models, estimate, exhaustive_check, full_correlation, max_violation_search,
    subspace_correlation, ubi_local, ubi_quantum, CatState, Direction, Error, HiddenVariableModel,
    LhvModel, Normalization, OutcomeRule, Polarization, Spin,
};
use serde::{Deserialize, Serialize};

use crate::args::{
    CorrelateArgs, LhvArgs, MaxViolationArgs, NormArg, PolArg, ScanArgs, Space, StateArgs, UbiArgs,
};
use crate::config::{DirLit, FileConfig, ModelSpec};
use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_QUADRATURE: usize = 100_000;
const DEFAULT_MODEL: &str = "sign/anti/w=1";

/// Output of `correlate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationOutput {
    pub space: Space,
    pub p_local: f64,
    pub p_nonlocal: f64,
    pub p_total: f64,
    pub scaled: bool,
    #[serde(rename = "N")]
    pub n: f64,
}

/// Flags merged over the config file, with `--deg` applied.
pub struct Ctx {
    pub file: FileConfig,
    pub deg: bool,
}

impl Ctx {
    fn unit(&self) -> f64 {
        if self.deg {
            std::f64::consts::PI / 180.0
        } else {
            1.0
        }
    }

    fn spin(&self, flag: &Option<String>) -> CliResult<Spin> {
        let lit = match (flag, &self.file.s) {
            (Some(s), _) => s.clone(),
            (None, Some(s)) => s.as_literal(),
            (None, None) => return Err(CliError::usage("missing spin (--s)")),
        };
        Ok(lit.parse()?)
    }

    fn pol(&self, flag: Option<PolArg>) -> Polarization {
        flag.or(self.file.pol).unwrap_or(PolArg::Anti).into()
    }

    fn angle(&self, flag: Option<f64>, file: Option<f64>, default: f64) -> CliResult<f64> {
        match flag.or(file) {
            Some(x) if x.is_finite() => Ok(x * self.unit()),
            Some(x) => Err(CliError::usage(format!("angle {x} is not finite"))),
            None => Ok(default),
        }
    }

    fn state_params(&self, args: &StateArgs) -> CliResult<(f64, f64)> {
        Ok((
            self.angle(args.xi, self.file.xi, FRAC_PI_4)?,
            self.angle(args.eta, self.file.eta, FRAC_PI_4)?,
        ))
    }

    fn state(&self, args: &StateArgs) -> CliResult<CatState> {
        let spin = self.spin(&args.s)?;
        let (xi, eta) = self.state_params(args)?;
        Ok(CatState::new(spin, self.pol(args.pol), xi, eta))
    }

    /// Raw `(theta, phi)` in user units, if given anywhere.
    fn dir_pair(&self, flag: &Option<String>, file: &Option<DirLit>, name: &str) -> CliResult<Option<[f64; 2]>> {
        match (flag, file) {
            (Some(s), _) | (None, Some(DirLit::Text(s))) => parse_pair(s, name).map(Some),
            (None, Some(DirLit::Pair(p))) => Ok(Some(*p)),
            (None, None) => Ok(None),
        }
    }

    fn direction(&self, flag: &Option<String>, file: &Option<DirLit>, name: &str) -> CliResult<Direction> {
        let [t, p] = self
            .dir_pair(flag, file, name)?
            .ok_or_else(|| CliError::usage(format!("missing direction --{name}")))?;
        Ok(Direction::new(t * self.unit(), p * self.unit())?)
    }

    fn normalization(&self, flag: Option<NormArg>, spin: Spin) -> Normalization {
        flag.or(self.file.normalization)
            .map(Normalization::from)
            .unwrap_or_else(|| Normalization::default_for(spin))
    }
}

fn parse_pair(s: &str, name: &str) -> CliResult<[f64; 2]> {
    let bad = || CliError::usage(format!("--{name} expects `theta,phi`, got `{s}`"));
    let (t, p) = s.split_once(',').ok_or_else(bad)?;
    let t: f64 = t.trim().parse().map_err(|_| bad())?;
    let p: f64 = p.trim().parse().map_err(|_| bad())?;
    if !(t.is_finite() && p.is_finite()) {
        return Err(bad());
    }
    Ok([t, p])
}

fn scs_output(state: &CatState, a: &Direction, b: &Direction, norm: Normalization) -> CliResult<CorrelationOutput> {
    let rep = subspace_correlation(state, a, b)?;
    let n = rep.probability;
    let k = match norm {
        Normalization::Raw => 1.0,
        Normalization::Scaled => {
            if n <= UNDERFLOW_GUARD {
                return Err(Error::Underflow {
                    n,
                    theta_a: a.theta(),
                    phi_a: a.phi(),
                    theta_b: b.theta(),
                    phi_b: b.phi(),
                }
                .into());
            }
            1.0 / n
        }
    };
    Ok(CorrelationOutput {
        space: Space::Scs,
        p_local: rep.p_local * k,
        p_nonlocal: rep.p_nonlocal * k,
        p_total: rep.p_total * k,
        scaled: norm == Normalization::Scaled,
        n,
    })
}

fn full_output(state: &CatState, a: &Direction, b: &Direction) -> CliResult<CorrelationOutput> {
    let rep = full_correlation(state, a, b)?;
    Ok(CorrelationOutput {
        space: Space::Full,
        p_local: rep.p_local,
        p_nonlocal: rep.p_nonlocal,
        p_total: rep.p_total,
        scaled: false,
        n: rep.probability,
    })
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn correlate(ctx: &Ctx, args: &CorrelateArgs) -> CliResult<String> {
    let state = ctx.state(&args.state)?;
    let a = ctx.direction(&args.a, &ctx.file.a, "a")?;
    let b = ctx.direction(&args.b, &ctx.file.b, "b")?;
    let out = match args.space.or(ctx.file.space).unwrap_or(Space::Full) {
        Space::Full => full_output(&state, &a, &b)?,
        Space::Scs => {
            let norm = ctx.normalization(args.normalization, state.spin);
            scs_output(&state, &a, &b, norm)?
        }
    };
    to_json(&out)
}

pub fn ubi(ctx: &Ctx, args: &UbiArgs) -> CliResult<String> {
    let state = ctx.state(&args.state)?;
    let a = ctx.direction(&args.a, &ctx.file.a, "a")?;
    let b = ctx.direction(&args.b, &ctx.file.b, "b")?;
    let c = ctx.direction(&args.c, &ctx.file.c, "c")?;
    let report = if args.local {
        ubi_local(&state, &a, &b, &c)?
    } else {
        let norm = ctx.normalization(args.normalization, state.spin);
        ubi_quantum(&state, &a, &b, &c, norm == Normalization::Scaled)?
    };
    to_json(&report)
}

const ANGLE_NAMES: [&str; 8] = ["xi", "eta", "theta_a", "phi_a", "theta_b", "phi_b", "theta_c", "phi_c"];

enum SweepValues {
    Spin(Vec<Spin>),
    /// Index into [`ANGLE_NAMES`]; values in user units.
    Angle(usize, Vec<f64>),
}

struct Sweep {
    name: String,
    values: SweepValues,
}

impl Sweep {
    fn len(&self) -> usize {
        match &self.values {
            SweepValues::Spin(v) => v.len(),
            SweepValues::Angle(_, v) => v.len(),
        }
    }
}

fn parse_sweep(text: &str) -> CliResult<Sweep> {
    let bad = |why: &str| CliError::usage(format!("bad --sweep `{text}`: {why}"));
    let (name, range) = text.split_once('=').ok_or_else(|| bad("expected name=start:stop:count"))?;
    let name = name.trim();
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let values = if name == "s" {
        if parts.len() != 2 {
            return Err(bad("spin sweeps take s=start:stop"));
        }
        let lo: Spin = parts[0].parse()?;
        let hi: Spin = parts[1].parse()?;
        if hi < lo {
            return Err(bad("stop is below start"));
        }
        SweepValues::Spin((lo.twice()..=hi.twice()).map(Spin::new).collect::<Result<_, _>>()?)
    } else {
        let idx = ANGLE_NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| bad("unknown parameter"))?;
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("count is not a positive integer"))?;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad("need finite bounds and count >= 1"));
        }
        let step = if count > 1 { (stop - start) / (count - 1) as f64 } else { 0.0 };
        SweepValues::Angle(idx, (0..count).map(|i| start + step * i as f64).collect())
    };
    Ok(Sweep {
        name: name.to_owned(),
        values,
    })
}

pub fn scan(ctx: &Ctx, args: &ScanArgs) -> CliResult<String> {
    let texts = if args.sweeps.is_empty() {
        ctx.file.sweep.clone().unwrap_or_default()
    } else {
        args.sweeps.clone()
    };
    if texts.is_empty() {
        return Err(CliError::usage("scan needs at least one --sweep"));
    }
    let sweeps: Vec<Sweep> = texts.iter().map(|t| parse_sweep(t)).collect::<CliResult<_>>()?;
    for (i, s) in sweeps.iter().enumerate() {
        if sweeps[..i].iter().any(|o| o.name == s.name) {
            return Err(CliError::usage(format!("parameter `{}` swept twice", s.name)));
        }
    }
    let spin_swept = sweeps.iter().any(|s| matches!(s.values, SweepValues::Spin(_)));
    let base_spin = if spin_swept { None } else { Some(ctx.spin(&args.state.s)?) };
    let pol = ctx.pol(args.state.pol);
    let unit = ctx.unit();

    // xi, eta and the six direction angles, all in user units
    let (xi, eta) = ctx.state_params(&args.state)?;
    let mut base = [xi / unit, eta / unit, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let equator = [FRAC_PI_2 / unit, 0.0];
    for (k, (flag, file, name)) in [
        (&args.a, &ctx.file.a, "a"),
        (&args.b, &ctx.file.b, "b"),
        (&args.c, &ctx.file.c, "c"),
    ]
    .into_iter()
    .enumerate()
    {
        let p = ctx.dir_pair(flag, file, name)?.unwrap_or(equator);
        base[2 + 2 * k] = p[0];
        base[3 + 2 * k] = p[1];
    }
    let space = args.space.or(ctx.file.space).unwrap_or(Space::Scs);

    let mut wtr = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = sweeps
        .iter()
        .map(|s| s.name.as_str())
        .chain(["p_local", "p_nonlocal", "p_total", "p_s"])
        .collect();
    wtr.write_record(&header)?;

    let total: usize = sweeps.iter().map(Sweep::len).product();
    let mut idx = vec![0usize; sweeps.len()];
    for _ in 0..total {
        let mut vals = base;
        let mut spin = base_spin;
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for (s, &i) in sweeps.iter().zip(&idx) {
            match &s.values {
                SweepValues::Spin(v) => {
                    spin = Some(v[i]);
                    row.push(format!("{:?}", v[i].value()));
                }
                SweepValues::Angle(k, v) => {
                    vals[*k] = v[i];
                    row.push(format!("{:?}", v[i]));
                }
            }
        }
        let spin = spin.expect("spin is swept or given");
        let v = vals.map(|x| x * unit);
        let state = CatState::new(spin, pol, v[0], v[1]);
        let a = Direction::new(v[2], v[3])?;
        let b = Direction::new(v[4], v[5])?;
        let c = Direction::new(v[6], v[7])?;
        let (pair, p_s) = match space {
            Space::Full => {
                let ab = full_output(&state, &a, &b)?;
                let ac = full_output(&state, &a, &c)?;
                let bc = full_output(&state, &b, &c)?;
                let p_s = ab.p_total * ac.p_total - bc.p_total.abs();
                (ab, p_s)
            }
            Space::Scs => {
                let norm = ctx.normalization(args.normalization, spin);
                let ab = scs_output(&state, &a, &b, norm)?;
                let rep = ubi_quantum(&state, &a, &b, &c, norm == Normalization::Scaled)?;
                (ab, rep.p_s)
            }
        };
        row.extend([pair.p_local, pair.p_nonlocal, pair.p_total, p_s].map(|x| format!("{x:?}")));
        wtr.write_record(&row)?;

        // odometer, last sweep fastest
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < sweeps[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn max_violation(ctx: &Ctx, args: &MaxViolationArgs) -> CliResult<String> {
    let spin = ctx.spin(&args.s)?;
    let pol = ctx.pol(args.pol);
    let mut cfg = ctx.file.search.unwrap_or_default();
    if let Some(v) = args.grid_points {
        cfg.grid_points = v;
    }
    if let Some(v) = args.refine_iterations {
        cfg.refine_iterations = v;
    }
    if let Some(v) = args.tolerance {
        cfg.tolerance = v;
    }
    if let Some(v) = args.top_candidates {
        cfg.top_candidates = v;
    }
    if let Some(v) = args.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(n) = args.normalization.or(ctx.file.normalization) {
        cfg.normalization = Some(n.into());
    }
    let result = max_violation_search(spin, pol, &cfg)?;
    to_json(&result)
}

/// `sign[/anti|para][/w=W]` or `phase-kK[/anti|para][/w=W]`.
pub fn parse_model_id(id: &str) -> CliResult<LhvModel> {
    let bad = |why: &str| CliError::usage(format!("bad model id `{id}`: {why}"));
    let mut parts = id.split('/').map(str::trim);
    let rule = match parts.next().unwrap_or_default() {
        "sign" => OutcomeRule::Sign,
        r => {
            let k = r
                .strip_prefix("phase-k")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| bad("rule must be `sign` or `phase-k<k>`"))?;
            OutcomeRule::Phase { k }
        }
    };
    let mut pol = Polarization::Antiparallel;
    let mut weight = 1.0;
    for p in parts {
        match p {
            "anti" => pol = Polarization::Antiparallel,
            "para" => pol = Polarization::Parallel,
            w if w.starts_with("w=") => weight = w[2..].parse().map_err(|_| bad("weight is not a number"))?,
            _ => return Err(bad("unknown component")),
        }
    }
    Ok(LhvModel::new(rule, pol, weight)?)
}

pub fn lhv(ctx: &Ctx, args: &LhvArgs) -> CliResult<String> {
    if args.list {
        let ids: Vec<String> = builtin_models().iter().map(|m| m.id()).collect();
        return to_json(&ids);
    }
    let model = match (&args.model, &ctx.file.model) {
        (Some(id), _) | (None, Some(ModelSpec::Id(id))) => parse_model_id(id)?,
        (None, Some(ModelSpec::Model(m))) => LhvModel::new(m.rule, m.polarization, m.weight)?,
        (None, None) => parse_model_id(DEFAULT_MODEL)?,
    };
    let a = ctx.direction(&args.a, &ctx.file.a, "a")?;
    let b = ctx.direction(&args.b, &ctx.file.b, "b")?;
    let c = ctx.direction(&args.c, &ctx.file.c, "c")?;
    if args.exhaustive || ctx.file.exhaustive == Some(true) {
        let points = args.grid_points.or(ctx.file.grid_points).unwrap_or(DEFAULT_QUADRATURE);
        to_json(&exhaustive_check(&model, &a, &b, &c, points)?)
    } else {
        let samples = args.samples.or(ctx.file.samples).unwrap_or(DEFAULT_SAMPLES);
        let seed = args.seed.or(ctx.file.seed).unwrap_or(0);
        to_json(&estimate(&model, &a, &b, &c, samples, seed)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_ids_round_trip_through_parser() {
        for m in builtin_models() {
            assert_eq!(parse_model_id(&m.id()).unwrap(), m);
        }
        let m = parse_model_id("phase-k2").unwrap();
        assert_eq!((m.rule, m.polarization, m.weight), (OutcomeRule::Phase { k: 2 }, Polarization::Antiparallel, 1.0));
        for bad in ["", "phase", "phase-k0", "sign/up", "sign/w=2", "sign/w=x"] {
            assert!(parse_model_id(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_parsing() {
        let s = parse_sweep("theta_b=0:1:5").unwrap();
        match s.values {
            SweepValues::Angle(4, v) => assert_eq!(v, [0.0, 0.25, 0.5, 0.75, 1.0]),
            _ => panic!("wrong sweep"),
        }
        let s = parse_sweep("s=1:5/2").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(parse_sweep("eta=1:2:1").unwrap().len(), 1);
        for bad in ["xi", "xi=0:1", "xi=0:1:0", "zeta=0:1:2", "s=2:1", "s=1/2:3:4", "xi=a:1:2"] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }
}
