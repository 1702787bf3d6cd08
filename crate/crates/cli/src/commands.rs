use serde_json::{json, Map, Value};
use udsponge::cantor::{
    analyze_special_system, bilipschitz_check, build_cantor_tree, check_endpoint_bounds, lipschitz_constants,
    to_binary_tree,
};
use udsponge::classify::{classify, extract_subsystem, line_segment_witness};
use udsponge::components::{
    approx_square, check_moran_bound, check_product_decomposition, component_diameter_profile,
    max_profile_ratio_sq, pre_moran_intervals, SimpleIfsFamily,
};
use udsponge::ifs::{parse_ifs, validate_lg, Cuboid, Interval, Violation};
use udsponge::scalar::{format_decimal, format_rational, format_sqrt_decimal};
use udsponge::tree::build_labeled_tree;
use udsponge::{Error, Ifs, Map1, Rational, Result};

use crate::report::{Output, Table};
use crate::Check;

pub struct Config {
    pub depth: Option<usize>,
    pub binary_depth: usize,
    pub deltas: Vec<Rational>,
    pub cap: usize,
    pub precision: u32,
    pub word: Option<Vec<usize>>,
    pub check: Check,
}

pub struct Outcome {
    pub output: Output,
    /// The input failed validation; the report is still emitted.
    pub rejected: bool,
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn r(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn rs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(r).collect())
}

fn interval(iv: &Interval<Rational>) -> Value {
    json!([r(&iv.lo), r(&iv.hi)])
}

fn cuboid(c: &Cuboid<Rational>) -> Value {
    Value::Array(c.sides.iter().map(interval).collect())
}

fn map1(m: &Map1) -> Value {
    json!({ "ratio": r(m.ratio()), "offset": r(m.offset()) })
}

fn word_text(w: &[usize]) -> String {
    w.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl Config {
    fn deltas_or(&self, default: &[Rational]) -> Vec<Rational> {
        if self.deltas.is_empty() {
            default.to_vec()
        } else {
            self.deltas.clone()
        }
    }

    fn grid(&self) -> Vec<Rational> {
        self.deltas_or(&[q(1, 8), q(1, 16), q(1, 32), q(1, 64)])
    }

    fn dec(&self, x: &Rational) -> Value {
        Value::String(format_decimal(x, self.precision))
    }

    fn sqrt_dec(&self, x: &Rational) -> Value {
        Value::String(format_sqrt_decimal(x, self.precision))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "binary_depth": self.binary_depth,
            "deltas": rs(&self.deltas),
            "cap": self.cap,
            "precision": self.precision,
            "word": self.word.as_ref().map(|w| word_text(w)),
            "check": self.check.as_str(),
        })
    }
}

pub fn run(name: &str, text: &str, config: &Config) -> Result<Outcome> {
    let ifs: Ifs = parse_ifs(text)?;
    let plain = |output: Output| {
        Ok(Outcome {
            output,
            rejected: false,
        })
    };
    match name {
        "validate" => {
            let (output, ok) = validate(&ifs);
            Ok(Outcome {
                output,
                rejected: !ok,
            })
        }
        "classify" => plain(classify_cmd(&ifs)?),
        "tree" => plain(tree_cmd(&ifs)?),
        "components" => plain(components_cmd(&ifs, config)?),
        "premoran" => plain(premoran_cmd(&ifs, config)?),
        "square" => plain(square_cmd(&ifs, config)?),
        "cantor" => plain(cantor_cmd(&ifs, config)?),
        "all" => {
            let (payload, ok) = all_cmd(&ifs, config)?;
            Ok(Outcome {
                output: Output { payload, table: None },
                rejected: !ok,
            })
        }
        other => Err(Error::Components(format!("unknown subcommand {other}"))),
    }
}

/// `all` over every bundled fixture; rejections are recorded, not fatal.
pub fn run_fixtures(config: &Config) -> Result<Outcome> {
    let mut payload = Map::new();
    for (name, text) in udsponge::fixtures::all() {
        let ifs: Ifs = parse_ifs(text)?;
        payload.insert(name.into(), all_cmd(&ifs, config)?.0);
    }
    Ok(Outcome {
        output: Output {
            payload: Value::Object(payload),
            table: None,
        },
        rejected: false,
    })
}

fn violation(v: &Violation) -> Value {
    match *v {
        Violation::Contraction { map, coord }
        | Violation::UnitCube { map, coord }
        | Violation::Ordering { map, coord } => json!({ "condition": v.tag(), "map": map, "coord": coord }),
        Violation::Overlap { level, first, second } => {
            json!({ "condition": v.tag(), "level": level, "maps": [first, second] })
        }
    }
}

fn validate(ifs: &Ifs) -> (Output, bool) {
    let rep = validate_lg(ifs);
    let payload = json!({
        "dim": ifs.dim(),
        "num_maps": ifs.len(),
        "lg_type": rep.lg_type(),
        "summary": rep.summary(),
        "conditions": {
            "contraction": rep.contraction_ok,
            "unit_cube": rep.unit_cube_ok,
            "coordinate_ordering": rep.coordinate_ordering_ok,
            "neat_projection": rep.neat_projection_ok,
        },
        "violations": rep.violations.iter().map(violation).collect::<Vec<_>>(),
    });
    let rows = rep
        .violations
        .iter()
        .map(|v| {
            let detail = match *v {
                Violation::Contraction { map, coord }
                | Violation::UnitCube { map, coord }
                | Violation::Ordering { map, coord } => format!("map={map} coord={coord}"),
                Violation::Overlap { level, first, second } => {
                    format!("level={level} maps={first},{second}")
                }
            };
            vec![v.tag().to_string(), detail]
        })
        .collect();
    (
        Output {
            payload,
            table: Some(Table {
                header: &["condition", "detail"],
                rows,
            }),
        },
        rep.lg_type(),
    )
}

fn classify_cmd(ifs: &Ifs) -> Result<Output> {
    let c = classify(ifs)?;
    let fibers: Vec<Value> = c
        .fiber_report
        .iter()
        .map(|f| {
            json!({
                "vertex": f.fiber.owner.to_string(),
                "rank": f.fiber.owner.rank(),
                "labels": f.fiber.labels.iter().map(map1).collect::<Vec<_>>(),
                "ratio_sum": r(&f.ratio_sum),
                "tiles": f.tiles,
            })
        })
        .collect();
    let rows = c
        .fiber_report
        .iter()
        .map(|f| {
            vec![
                f.fiber.owner.to_string(),
                f.fiber.owner.rank().to_string(),
                f.fiber.labels.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" | "),
                format_rational(&f.ratio_sum),
                f.tiles.to_string(),
            ]
        })
        .collect();
    let (segment, subsystem) = match &c.witness {
        Some(w) => {
            let segment = if w.rank() + 1 == ifs.dim() {
                let seg = line_segment_witness(ifs, w)?;
                json!({ "base": rs(&seg.base), "axis": seg.axis })
            } else {
                Value::Null
            };
            let sub = extract_subsystem(ifs, w)?;
            let sub = json!({
                "prefix": sub.prefix_maps.iter().map(map1).collect::<Vec<_>>(),
                "anchor_point": sub.anchor_point.as_deref().map(rs),
                "chosen_maps": sub.chosen_maps,
                "system": sub.sub_ifs.to_string(),
            });
            (segment, sub)
        }
        None => (Value::Null, Value::Null),
    };
    let eq = c.equivalent_statements;
    let payload = json!({
        "uniformly_disconnected": c.uniformly_disconnected,
        "conformal_dim_class": c.conformal_dim_class.as_str(),
        "witness": c.witness.as_ref().map(|w| w.to_string()),
        "equivalent_statements": {
            "uniformly_disconnected": eq.uniformly_disconnected,
            "projections_totally_disconnected": eq.projections_totally_disconnected,
            "no_fiber_attractor_is_unit_interval": eq.no_fiber_attractor_is_unit_interval,
        },
        "fibers": fibers,
        "line_segment": segment,
        "subsystem": subsystem,
    });
    Ok(Output {
        payload,
        table: Some(Table {
            header: &["vertex", "rank", "labels", "ratio_sum", "tiles"],
            rows,
        }),
    })
}

fn tree_cmd(ifs: &Ifs) -> Result<Output> {
    let tree = build_labeled_tree(ifs)?;
    let mut levels = Vec::new();
    let mut rows = Vec::new();
    for rank in 0..ifs.dim() {
        let mut level = Vec::new();
        for v in tree.level(rank) {
            let labels: Vec<&Map1> = tree.offspring(v)?.iter().filter_map(|c| c.label()).collect();
            rows.push(vec![
                rank.to_string(),
                v.to_string(),
                labels.len().to_string(),
                labels.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" | "),
            ]);
            level.push(json!({
                "vertex": v.to_string(),
                "offspring": labels.into_iter().map(map1).collect::<Vec<_>>(),
            }));
        }
        levels.push(Value::Array(level));
    }
    Ok(Output {
        payload: json!({
            "dim": tree.dim(),
            "level_sizes": tree.level_sizes(),
            "levels": levels,
        }),
        table: Some(Table {
            header: &["rank", "vertex", "num_offspring", "labels"],
            rows,
        }),
    })
}

fn components_cmd(ifs: &Ifs, config: &Config) -> Result<Output> {
    let depth = config.depth.unwrap_or(3);
    let rows = component_diameter_profile(ifs, depth, &config.grid(), config.cap)?;
    let table = rows
        .iter()
        .map(|row| {
            vec![
                format_rational(&row.delta),
                row.num_components.to_string(),
                format_rational(&row.max_diam_sq),
                format_sqrt_decimal(&row.max_diam_sq, config.precision),
                format_sqrt_decimal(&row.ratio_sq, config.precision),
            ]
        })
        .collect();
    let max_ratio = max_profile_ratio_sq(&rows);
    let payload = json!({
        "depth": depth,
        "rows": rows.iter().map(|row| json!({
            "delta": r(&row.delta),
            "num_components": row.num_components,
            "max_diam_sq": r(&row.max_diam_sq),
            "max_diam_decimal": config.sqrt_dec(&row.max_diam_sq),
            "ratio_sq": r(&row.ratio_sq),
            "ratio_decimal": config.sqrt_dec(&row.ratio_sq),
        })).collect::<Vec<_>>(),
        "max_ratio_sq": r(&max_ratio),
        "max_ratio_decimal": config.sqrt_dec(&max_ratio),
    });
    Ok(Output {
        payload,
        table: Some(Table {
            header: &["delta", "num_components", "max_diam_sq", "max_diam_decimal", "ratio_decimal"],
            rows: table,
        }),
    })
}

/// Fibers of the rank `d - 1` vertices, the family whose pre-Moran sets
/// are the vertical slices of cylinders.
fn top_family(ifs: &Ifs) -> Result<SimpleIfsFamily<Rational>> {
    let tree = build_labeled_tree(ifs)?;
    let fibers: Vec<_> = tree
        .level(ifs.dim() - 1)
        .iter()
        .map(|v| tree.fiber_ifs(v))
        .collect::<Result<_>>()?;
    SimpleIfsFamily::from_fibers(&fibers)
}

fn premoran_cmd(ifs: &Ifs, config: &Config) -> Result<Output> {
    let family = top_family(ifs)?;
    let word = config
        .word
        .clone()
        .unwrap_or_else(|| vec![0; config.depth.unwrap_or(2)]);
    let set = pre_moran_intervals(&family, &word, config.cap)?;
    let deltas = config.grid();
    let tiling = (0..family.len()).find(|&j| family.tiles(j));
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for d in &deltas {
        let lengths = set.component_lengths(d);
        let longest = lengths.iter().max().cloned().unwrap_or_else(|| q(0, 1));
        let mut row = Map::new();
        row.insert("delta".into(), r(d));
        row.insert("num_components".into(), json!(lengths.len()));
        row.insert("max_component".into(), r(&longest));
        let mut cells = vec![format_rational(d), lengths.len().to_string(), format_rational(&longest)];
        if tiling.is_none() {
            let rep = check_moran_bound(&family, &word, d, config.cap)?;
            row.insert("admissible".into(), json!(rep.admissible));
            row.insert("threshold".into(), r(&rep.threshold));
            row.insert("bound".into(), r(&rep.bound));
            row.insert("holds".into(), json!(rep.holds));
            cells.extend([
                rep.admissible.to_string(),
                format_rational(&rep.threshold),
                format_rational(&rep.bound),
                rep.holds.to_string(),
            ]);
        } else {
            cells.extend(["-".to_string(), "-".into(), "-".into(), "-".into()]);
        }
        rows.push(Value::Object(row));
        table.push(cells);
    }
    let payload = json!({
        "family": (0..family.len())
            .map(|j| family.member(j).iter().map(map1).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "word": word,
        "num_intervals": set.intervals.len(),
        "intervals": set.intervals.iter().map(interval).collect::<Vec<_>>(),
        "alpha_star": r(&family.alpha_star()),
        "beta_star": r(&family.beta_star()),
        "g_star": r(&family.g_star()),
        "tiling_member": tiling,
        "rows": rows,
    });
    Ok(Output {
        payload,
        table: Some(Table {
            header: &["delta", "num_components", "max_component", "admissible", "threshold", "bound", "holds"],
            rows: table,
        }),
    })
}

fn square_cmd(ifs: &Ifs, config: &Config) -> Result<Output> {
    let deltas = config.grid();
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for d in &deltas {
        let sq = match &config.word {
            Some(w) => approx_square(ifs, w, d)?,
            None => constant_word_square(ifs, d)?,
        };
        table.push(vec![
            format_rational(d),
            sq.depths.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
            sq.cuboid.to_string(),
        ]);
        rows.push(json!({ "delta": r(d), "depths": sq.depths, "box": cuboid(&sq.cuboid) }));
    }
    let product = if ifs.dim() >= 2 {
        let mut m = Map::new();
        for k in 1..=config.depth.unwrap_or(3) {
            m.insert(k.to_string(), json!(check_product_decomposition(ifs, k, config.cap)?));
        }
        Value::Object(m)
    } else {
        Value::Null
    };
    Ok(Output {
        payload: json!({
            "word": config.word.as_ref().map(|w| word_text(w)).unwrap_or_else(|| "0,0,...".into()),
            "squares": rows,
            "product_decomposition": product,
        }),
        table: Some(Table {
            header: &["delta", "depths", "box"],
            rows: table,
        }),
    })
}

/// Approximate square along `0 0 0 ...`, lengthening the word until every
/// coordinate drops below `delta`.
fn constant_word_square(ifs: &Ifs, delta: &Rational) -> Result<udsponge::components::ApproxSquare<Rational>> {
    let mut len = 16;
    loop {
        match approx_square(ifs, &vec![0; len], delta) {
            Err(Error::Components(_)) if len < 1 << 14 => len *= 2,
            other => return other,
        }
    }
}

fn cantor_cmd(ifs: &Ifs, config: &Config) -> Result<Output> {
    let (sys, consts) = analyze_special_system(ifs)?;
    let depth = config.depth.unwrap_or(4);
    let mut payload = Map::new();
    payload.insert(
        "system".into(),
        json!({
            "order": sys.order,
            "a": rs(&sys.a),
            "b": rs(&sys.b),
            "deltas": sys.deltas.iter().map(|d| rs(d)).collect::<Vec<_>>(),
            "tau": (1..sys.m()).map(|j| sys.tau_index(j)).collect::<Vec<_>>(),
            "s": rs(&consts.s),
            "L": r(&consts.l),
            "L_decimal": config.dec(&consts.l),
            "series_bracket": [r(&consts.truncated.0), r(&consts.truncated.1)],
            "series_depth": consts.truncation_depth,
            "r_star": r(&sys.r_star),
            "gamma": sys.gamma().as_ref().map(r),
        }),
    );
    let tree = build_cantor_tree(&sys, &consts, depth, config.cap)?;
    let mut table = Vec::new();
    for k in 0..=depth {
        for (idx, iv) in tree.level(k).iter().enumerate() {
            let w: Vec<usize> = {
                let mut w = vec![0; k];
                let mut i = idx;
                for slot in w.iter_mut().rev() {
                    *slot = i % sys.m();
                    i /= sys.m();
                }
                w
            };
            table.push(vec![
                k.to_string(),
                word_text(&w),
                format_rational(&iv.lo),
                format_rational(&iv.hi),
                format_rational(&iv.len()),
            ]);
        }
    }
    let wants = |c: Check| config.check == Check::All || config.check == c;
    if wants(Check::Tree) {
        let outcome = |r: Result<usize>| match r {
            Ok(n) => json!({ "ok": true, "checked": n }),
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        };
        payload.insert(
            "tree".into(),
            json!({
                "depth": depth,
                "root": interval(&tree.level(0)[0]),
                "level_one": tree.level(depth.min(1)).iter().map(interval).collect::<Vec<_>>(),
                "additivity": outcome(tree.check_additivity()),
                "length_bound": outcome(tree.check_length_bound()),
            }),
        );
    }
    if wants(Check::Lipschitz) {
        let lip = lipschitz_constants(&sys, &consts);
        let endpoints = match check_endpoint_bounds(&sys, &lip, depth) {
            Ok(n) => json!({ "ok": true, "checked": n }),
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        };
        let rep = bilipschitz_check(&tree, &lip, depth, config.cap)?;
        payload.insert(
            "lipschitz".into(),
            json!({
                "c0": r(&lip.c0),
                "c1_sq": r(&lip.c1_sq),
                "c1_bracket": [r(&lip.c1_bracket.0), r(&lip.c1_bracket.1)],
                "c_prime": r(&lip.c_prime),
                "big_c0_bracket": [config.dec(&lip.big_c0.0), config.dec(&lip.big_c0.1)],
                "endpoint_bounds": endpoints,
                "bilipschitz": {
                    "depth": depth,
                    "pairs": rep.pairs,
                    "identified": rep.identified,
                    "min_ratio_sq": r(&rep.min_ratio_sq),
                    "max_ratio_sq": r(&rep.max_ratio_sq),
                    "min_ratio_decimal": config.sqrt_dec(&rep.min_ratio_sq),
                    "max_ratio_decimal": config.sqrt_dec(&rep.max_ratio_sq),
                    "bound_low_sq": r(&rep.bound_low_sq),
                    "violations": rep.violations,
                    "first_violation": rep.first_violation.as_ref().map(|(a, b)| json!([word_text(a), word_text(b)])),
                    "pass": rep.pass,
                },
            }),
        );
    }
    if wants(Check::Binary) {
        let bin = to_binary_tree(&tree, config.binary_depth, config.cap)?;
        payload.insert(
            "binary".into(),
            json!({
                "depth": bin.depth,
                "T": r(&bin.t),
                "balance_violations": bin.balance_violations,
                "balanced": bin.balanced(),
                "gap_ratio_table": bin.gap_ratio_table.iter().map(|v| v.as_ref().map(r)).collect::<Vec<_>>(),
                "gap_ratio_bounds": rs(&bin.gap_ratio_bounds),
                "gap_ratio_failures": bin.gap_ratio_failures(),
            }),
        );
    }
    Ok(Output {
        payload: Value::Object(payload),
        table: Some(Table {
            header: &["depth", "word", "lo", "hi", "length"],
            rows: table,
        }),
    })
}

fn skipped(e: &Error) -> Value {
    json!({ "skipped": e.to_string() })
}

fn all_cmd(ifs: &Ifs, config: &Config) -> Result<(Value, bool)> {
    let (validation, ok) = validate(ifs);
    let mut payload = Map::new();
    payload.insert("validate".into(), validation.payload);
    if !ok {
        return Ok((Value::Object(payload), false));
    }
    let mut section = |name: &str, r: Result<Output>| -> Result<()> {
        let value = match r {
            Ok(o) => o.payload,
            Err(e) if e.is_resource_cap() => return Err(e),
            Err(e) => skipped(&e),
        };
        payload.insert(name.into(), value);
        Ok(())
    };
    section("classify", classify_cmd(ifs))?;
    section("tree", tree_cmd(ifs))?;
    section("components", components_cmd(ifs, config))?;
    section("square", square_cmd(ifs, config))?;
    section("premoran", premoran_cmd(ifs, config))?;
    section("cantor", cantor_cmd(ifs, config))?;
    Ok((Value::Object(payload), true))
}
