use padic_tube::dims::{complex_dimensions, zeros_of_zeta, DimensionSet, LineKind, RootOptions};
use padic_tube::ifs::{contraction_ratio, image_ball, length_counts};
use padic_tube::minkowski::{
    average_content, cesaro_average, minkowski_dimension, nonmeasurability_report, ProfileOptions,
};
use padic_tube::num::format_float;
use padic_tube::tube::{log_uniform_grid, tube_report, tube_sweep, ExplicitFormula, TubeReport};
use padic_tube::zeta::{
    build_zeta, similarity_dimension_with_tolerance, total_length, ZetaFunction,
};
use padic_tube::{DimsError, PAdicBall};
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::config::{build_system, parse_decimal, Command, ResolvedSystem, RunConfig};
use crate::failure::Failure;
use crate::render::Rendered;

struct Context<'a> {
    cfg: &'a RunConfig,
    sys: ResolvedSystem,
}

impl Context<'_> {
    fn prec(&self) -> u32 {
        self.cfg.precision
    }

    fn zeta(&self) -> ZetaFunction {
        build_zeta(&self.sys.lattice)
    }

    fn dims(&self, zf: &ZetaFunction) -> Result<DimensionSet, Failure> {
        Ok(complex_dimensions(
            zf,
            RootOptions::with_precision(self.prec()),
        )?)
    }

    fn precision_line(&self) -> String {
        format!("precision: {} bits", self.prec())
    }
}

fn dimension(dims: &DimensionSet) -> Result<Float, Failure> {
    dims.dimension()
        .cloned()
        .ok_or_else(|| DimsError::NotPole.into())
}

fn integer_value(x: &Integer) -> Value {
    x.to_u64()
        .map(Value::from)
        .unwrap_or_else(|| Value::from(x.to_string()))
}

fn float_value(x: &Float) -> Value {
    Value::from(format_float(x))
}

pub fn run(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let ctx = Context {
        cfg,
        sys: build_system(&cfg.input)?,
    };
    match cfg.command {
        Command::Validate => Ok(validate(&ctx)),
        Command::Zeta => zeta(&ctx),
        Command::Dims => {
            let zf = ctx.zeta();
            let dims = ctx.dims(&zf)?;
            Ok(dimension_table(&ctx, &dims))
        }
        Command::Zeros => {
            let zeros = zeros_of_zeta(&ctx.zeta(), RootOptions::with_precision(ctx.prec()))?;
            Ok(dimension_table(&ctx, &zeros))
        }
        Command::Tube => tube(&ctx),
        Command::Sweep => sweep(&ctx),
        Command::Content => content(&ctx),
        Command::Lengths => Ok(lengths(&ctx)),
        Command::Report => report(&ctx),
    }
}

fn map_text(a: &Rational, b: &Rational) -> String {
    if *b == 0 {
        format!("x -> {a}x")
    } else {
        format!("x -> {b} + {a}x")
    }
}

fn validate(ctx: &Context) -> Rendered {
    let lattice = &ctx.sys.lattice;
    let p = lattice.prime();
    let mut rows = Vec::new();
    let mut maps_json = Vec::new();
    let mut gaps_json = Vec::new();
    match &ctx.sys.system {
        Some(system) => {
            let unit = PAdicBall::unit(p);
            for (i, f) in system.maps().iter().enumerate() {
                let image = image_ball(f, &unit).expect("validated map");
                let ratio = contraction_ratio(f);
                rows.push(vec![
                    format!("map {}", i + 1),
                    map_text(f.a(), f.b()),
                    image.to_string(),
                    f.exponent().to_string(),
                    ratio.to_string(),
                ]);
                maps_json.push(json!({
                    "a": f.a().to_string(),
                    "b": f.b().to_string(),
                    "exponent": f.exponent(),
                    "ratio": ratio.to_string(),
                    "image": image,
                }));
            }
            for (k, g) in system.gaps().iter().enumerate() {
                rows.push(vec![
                    format!("gap {}", k + 1),
                    String::new(),
                    g.to_string(),
                    g.level().to_string(),
                    padic_tube::padic::haar_measure(g).to_string(),
                ]);
                gaps_json.push(serde_json::to_value(g).expect("ball serializes"));
            }
        }
        None => {
            for (j, &n) in lattice.scaling_exponents().iter().enumerate() {
                let len = p.rational_pow(-i64::from(n));
                rows.push(vec![
                    format!("scaling {}", j + 1),
                    String::new(),
                    String::new(),
                    n.to_string(),
                    len.to_string(),
                ]);
            }
            for (k, &m) in lattice.gap_exponents().iter().enumerate() {
                let len = p.rational_pow(-i64::from(m));
                rows.push(vec![
                    format!("gap {}", k + 1),
                    String::new(),
                    String::new(),
                    m.to_string(),
                    len.to_string(),
                ]);
            }
        }
    }
    let json = json!({
        "valid": true,
        "prime": p.get(),
        "d": lattice.d(),
        "r": lattice.r().to_string(),
        "scaling_exponents": lattice.scaling_exponents(),
        "gap_exponents": lattice.gap_exponents(),
        "scaled_scaling_exponents": lattice.scaled_scaling_exponents(),
        "scaled_gap_exponents": lattice.scaled_gap_exponents(),
        "ratio_sum": lattice.ratio_sum().to_string(),
        "gap_sum": lattice.gap_sum().to_string(),
        "maps": maps_json,
        "gaps": gaps_json,
    });
    Rendered {
        json,
        preamble: vec![
            format!("valid self-similar system on Z_{p}"),
            format!("d = {}, r = {}", lattice.d(), lattice.r()),
            format!(
                "ratio sum {} + gap sum {} = 1",
                lattice.ratio_sum(),
                lattice.gap_sum()
            ),
        ],
        headers: ["item", "map", "ball", "exponent", "length"]
            .map(String::from)
            .to_vec(),
        rows,
    }
}

fn zeta(ctx: &Context) -> Result<Rendered, Failure> {
    let zf = ctx.zeta();
    let d = similarity_dimension_with_tolerance(&zf, ctx.prec(), 0.0)?;
    let total = total_length(&zf)?;
    let json = json!({
        "zeta": zf,
        "r": zf.r().to_string(),
        "reduced_numerator": zf.reduced_numerator().to_string(),
        "reduced_denominator": zf.reduced_denominator().to_string(),
        "common_factor": zf.common_factor().to_string(),
        "cancellation": zf.has_cancellation(),
        "total_length": total.to_string(),
        "D": format_float(&d),
        "precision_bits": ctx.prec(),
    });
    let pairs = vec![
        ("numerator N(z)", zf.numerator().to_string()),
        ("denominator Q(z)", zf.denominator().to_string()),
        ("common factor", zf.common_factor().to_string()),
        ("reduced numerator", zf.reduced_numerator().to_string()),
        ("reduced denominator", zf.reduced_denominator().to_string()),
        ("total length zeta(1)", total.to_string()),
        ("D", format_float(&d)),
    ];
    Ok(Rendered::pairs(
        json,
        vec![
            format!("zeta(s) = N(z)/Q(z), z = ({})^s", zf.r()),
            ctx.precision_line(),
        ],
        pairs,
    ))
}

fn dimension_table(ctx: &Context, set: &DimensionSet) -> Rendered {
    let json = serde_json::to_value(set).expect("dimension set serializes");
    let poles = set.kind() == LineKind::Pole;
    let mut headers = vec!["u", "re", "im", "multiplicity"];
    if poles {
        headers.extend(["residue_re", "residue_im"]);
    }
    let rows = set
        .lines()
        .iter()
        .enumerate()
        .map(|(u, line)| {
            let mut row = vec![
                (u + 1).to_string(),
                format_float(&line.base.re),
                format_float(&line.base.im),
                line.multiplicity.to_string(),
            ];
            if poles {
                match &line.residue {
                    Some(res) => row.extend([format_float(&res.re), format_float(&res.im)]),
                    None => row.extend([String::new(), String::new()]),
                }
            }
            row
        })
        .collect();
    let what = if poles { "complex dimensions" } else { "zeros" };
    let mut preamble = vec![
        format!("{what}: {} line(s) w_u + i k p, k in Z", set.lines().len()),
        format!("period p = {}", format_float(set.period())),
    ];
    if let Some(d) = set.dimension() {
        preamble.push(format!("D = {}", format_float(d)));
    }
    preamble.push(ctx.precision_line());
    Rendered {
        json,
        preamble,
        headers: headers.into_iter().map(String::from).collect(),
        rows,
    }
}

struct TubeSetup {
    zf: ZetaFunction,
    formula: ExplicitFormula,
    dimension: Float,
}

fn tube_setup(ctx: &Context) -> Result<TubeSetup, Failure> {
    let zf = ctx.zeta();
    let dims = ctx.dims(&zf)?;
    let dimension = dimension(&dims)?;
    let formula = ExplicitFormula::new(&zf, &dims)?;
    Ok(TubeSetup {
        zf,
        formula,
        dimension,
    })
}

fn report_json(r: &TubeReport) -> Value {
    serde_json::to_value(r).expect("tube report serializes")
}

fn tube(ctx: &Context) -> Result<Rendered, Failure> {
    let eps = ctx.cfg.eps.as_ref().expect("checked when parsing");
    let s = tube_setup(ctx)?;
    let r = tube_report(
        &ctx.sys.lattice,
        &s.zf,
        &s.formula,
        &s.dimension,
        eps,
        ctx.cfg.truncation,
    )?;
    let mut json = report_json(&r);
    json["D"] = float_value(&s.dimension);
    json["precision_bits"] = Value::from(ctx.prec());
    let pairs = vec![
        ("epsilon", eps.to_string()),
        ("V_direct", r.v_direct.to_string()),
        (
            "V_direct (decimal)",
            format_float(&Float::with_val(ctx.prec(), &r.v_direct)),
        ),
        ("V_explicit", format_float(&r.v_explicit)),
        ("discrepancy", format_float(&r.discrepancy)),
        ("imaginary residual", format_float(&r.imaginary_residual)),
        ("leading term", format_float(&r.leading_term)),
        ("epsilon^-(1-D) V", format_float(&r.normalized)),
        ("breakpoint", r.breakpoint_flag.to_string()),
        ("within validity range", r.in_validity_range.to_string()),
    ];
    Ok(Rendered::pairs(
        json,
        vec![
            format!("truncation N = {}", ctx.cfg.truncation),
            ctx.precision_line(),
        ],
        pairs,
    ))
}

pub const SWEEP_COLUMNS: [&str; 7] = [
    "epsilon",
    "V_direct",
    "V_explicit",
    "discrepancy",
    "breakpoint_flag",
    "leading_term",
    "epsilon_pow_D_normalized",
];

fn sweep(ctx: &Context) -> Result<Rendered, Failure> {
    let g = &ctx.cfg.grid;
    let labels: Vec<String> = log_uniform_grid(g.min, g.max, g.points)
        .iter()
        .map(|e| format!("{e:e}"))
        .collect();
    let eps: Vec<Rational> = labels
        .iter()
        .map(|t| parse_decimal(t).expect("formatted f64"))
        .collect();
    let s = tube_setup(ctx)?;
    let reports = tube_sweep(
        &ctx.sys.lattice,
        &s.zf,
        &s.formula,
        &s.dimension,
        &eps,
        ctx.cfg.truncation,
    )?;
    let rows = labels
        .iter()
        .zip(&reports)
        .map(|(label, r)| {
            vec![
                label.clone(),
                format_float(&Float::with_val(ctx.prec(), &r.v_direct)),
                format_float(&r.v_explicit),
                format_float(&r.discrepancy),
                r.breakpoint_flag.to_string(),
                format_float(&r.leading_term),
                format_float(&r.normalized),
            ]
        })
        .collect();
    let json = json!({
        "D": format_float(&s.dimension),
        "truncation": ctx.cfg.truncation,
        "precision_bits": ctx.prec(),
        "rows": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    Ok(Rendered {
        json,
        preamble: vec![
            format!("D = {}", format_float(&s.dimension)),
            format!("truncation N = {}", ctx.cfg.truncation),
            ctx.precision_line(),
        ],
        headers: SWEEP_COLUMNS.map(String::from).to_vec(),
        rows,
    })
}

fn content(ctx: &Context) -> Result<Rendered, Failure> {
    let lattice = &ctx.sys.lattice;
    let dims = ctx.dims(&ctx.zeta())?;
    let d = dimension(&dims)?;
    let average = average_content(lattice, &dims)?;
    let cesaro = cesaro_average(lattice, &dims, ctx.cfg.cesaro_l)?;
    let fit = minkowski_dimension(lattice, &dims)?;
    let json = json!({
        "D": format_float(&d),
        "average_content": format_float(&average),
        "cesaro_L": ctx.cfg.cesaro_l,
        "cesaro_value": format_float(&cesaro),
        "fitted_slope": fit.fitted_slope,
        "slope_agrees": fit.agrees,
        "precision_bits": ctx.prec(),
    });
    let pairs = vec![
        ("D", format_float(&d)),
        ("average content", format_float(&average)),
        ("Cesaro average", format_float(&cesaro)),
        ("fitted slope of ln V", format!("{:.6}", fit.fitted_slope)),
        ("expected slope 1 - D", format!("{:.6}", 1.0 - d.to_f64())),
    ];
    Ok(Rendered::pairs(
        json,
        vec![
            format!("Cesaro window L = {} levels", ctx.cfg.cesaro_l),
            ctx.precision_line(),
        ],
        pairs,
    ))
}

fn lengths(ctx: &Context) -> Rendered {
    let lattice = &ctx.sys.lattice;
    let counts = length_counts(lattice, ctx.cfg.max_level);
    let rows: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = i as u32 + 1;
            vec![m.to_string(), lattice.r_pow(m).to_string(), c.to_string()]
        })
        .collect();
    let json = json!({
        "prime": lattice.prime().get(),
        "d": lattice.d(),
        "r": lattice.r().to_string(),
        "rows": counts.iter().enumerate().map(|(i, c)| json!({
            "m": i + 1,
            "r_pow_m": lattice.r_pow(i as u32 + 1).to_string(),
            "c_m": integer_value(c),
        })).collect::<Vec<_>>(),
    });
    Rendered {
        json,
        preamble: vec![format!(
            "lengths r^m with multiplicity c_m, r = {}",
            lattice.r()
        )],
        headers: ["m", "r^m", "c_m"].map(String::from).to_vec(),
        rows,
    }
}

fn report(ctx: &Context) -> Result<Rendered, Failure> {
    let lattice = &ctx.sys.lattice;
    let dims = ctx.dims(&ctx.zeta())?;
    let average = average_content(lattice, &dims)?;
    let cesaro = cesaro_average(lattice, &dims, ctx.cfg.cesaro_l)?;
    let opts = ProfileOptions {
        samples_per_period: ctx.cfg.samples.max(4),
        base_level: ctx.cfg.base_level,
        ..ProfileOptions::default()
    };
    let osc = nonmeasurability_report(lattice, &dims, opts)?;
    let exact = osc.exact.as_ref();
    let json = json!({
        "D": format_float(&osc.dimension),
        "average_content": format_float(&average),
        "cesaro_L": ctx.cfg.cesaro_l,
        "cesaro_value": format_float(&cesaro),
        "liminf": format_float(&osc.liminf),
        "limsup": format_float(&osc.limsup),
        "amplitude": format_float(&osc.amplitude),
        "exact_liminf": exact.map(|e| e.liminf.to_string()),
        "exact_limsup": exact.map(|e| e.limsup.to_string()),
        "asymptotic_liminf": osc.asymptotic_liminf.as_ref().map(format_float),
        "base_level": osc.base_level,
        "samples_per_period": osc.samples_per_period,
        "precision_bits": ctx.prec(),
    });
    let mut pairs = vec![
        ("D", format_float(&osc.dimension)),
        ("average content", format_float(&average)),
        ("Cesaro average", format_float(&cesaro)),
        ("liminf", format_float(&osc.liminf)),
        ("limsup", format_float(&osc.limsup)),
        ("amplitude", format_float(&osc.amplitude)),
    ];
    if let Some(e) = exact {
        pairs.push(("liminf (exact)", e.liminf.to_string()));
        pairs.push(("limsup (exact)", e.limsup.to_string()));
    }
    Ok(Rendered::pairs(
        json,
        vec![
            format!(
                "oscillation read at level {}, Cesaro window L = {}",
                osc.base_level, ctx.cfg.cesaro_l
            ),
            ctx.precision_line(),
        ],
        pairs,
    ))
}
