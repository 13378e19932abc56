//! Command-line front end: load models, run analyses, emit human-readable
//! tables or machine-readable JSON.
//!
//! Exit codes: 0 success, 1 size-guard refusal, 2 validation error,
//! 64 unknown subcommand.

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gptkit::composite::{
    chsh_max, is_separable, min_max_tensor, pr_box, uniform_correlator, CompositeState,
    Separability, TensorKind,
};
use gptkit::infotheory::{
    measurement_entropy, mixing_entropy, run_information_causality, IcResource,
};
use gptkit::jordan::{
    jordan_model_checks, quantum_chsh_optimize, singlet, JordanKind, JordanSystem, QuantumModel,
};
use gptkit::ordspace::LinearHull;
use gptkit::protocols::{
    broadcastable, find_distinguishing_observable, is_steering, steering_image_is_face,
    verify_teleportation, BipartiteEffect, Broadcast, CloningMap,
};
use gptkit::rat::{format_rat, parse_rat, rat_to_f64, Matrix, Rat, Vector};
use gptkit::testspace::{self, Classicality, Model, ProbWeight};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "gptkit",
    about = "Analyze finite-dimensional generalized probabilistic models",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of human tables.
    #[arg(long, global = true)]
    json: bool,
    /// Guard: refuse automorphism searches above this many outcomes.
    #[arg(long, global = true, default_value_t = 24)]
    max_outcomes: usize,
    /// Guard: refuse decomposition enumeration above this many vertices.
    #[arg(long, global = true, default_value_t = 16)]
    max_vertices: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Model file (JSON) or builtin:{squarebit|firefly|grid3|graph3|ngon:k|classical:n}.
    #[arg(long)]
    model: String,
}

#[derive(Args)]
struct PairArg {
    /// First component model (path or builtin).
    #[arg(long)]
    a: String,
    /// Second component model (path or builtin).
    #[arg(long)]
    b: String,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the exact pure states of a model.
    PureStates(ModelArg),
    /// Classify a model as classical, partition, or neither.
    Classify(ModelArg),
    /// Build the minimal or maximal tensor product of two models.
    Tensor {
        #[command(flatten)]
        pair: PairArg,
        /// min = separable states only; max = all non-signaling states.
        #[arg(long, default_value = "max")]
        kind: String,
    },
    /// Maximize the CHSH parameter over a tensor product.
    Chsh {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value = "max")]
        tensor: String,
    },
    /// Decide separability of a composite state.
    Separable {
        #[command(flatten)]
        pair: PairArg,
        /// builtin:pr, builtin:uniform, builtin:product:I,J, or a JSON table
        /// file keyed "xlabel|ylabel".
        #[arg(long)]
        state: String,
    },
    /// Find a distinguishing observable and cloning map for pure states.
    Clone {
        #[command(flatten)]
        model: ModelArg,
        /// Comma-separated vertex indices (lexicographic order).
        #[arg(long)]
        states: String,
    },
    /// Decide joint broadcastability of pure states.
    Broadcast {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        states: String,
    },
    /// Verify the canonical conclusive teleportation protocol of a model.
    Teleport(ModelArg),
    /// Steering analysis of a composite state.
    Steer {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        state: String,
    },
    /// Measurement and mixing entropy of a state.
    Entropy {
        #[command(flatten)]
        model: ModelArg,
        /// Comma-separated exact rational weight values, or vertex:I.
        #[arg(long)]
        state: String,
    },
    /// Information-causality protocol runs.
    Ic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// pr or classical.
        #[arg(long, default_value = "pr")]
        resource: String,
    },
    /// Euclidean Jordan algebra self-checks.
    Jordan {
        /// real:N, complex:N, quat:N, or spin:N.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 12345)]
        seed: u64,
    },
    /// Emit the Greechie diagram of a model's test space as DOT.
    Greechie(ModelArg),
}

fn main() {
    // Internal parallelism cap; a failed pool build only means a pool was
    // already installed.
    if let Ok(threads) = std::env::var("GPTKIT_MAX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::InvalidSubcommand => 64,
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(0);
                }
                _ => 2,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = format!("{e:#}").contains("size guard");
            std::process::exit(if guard { 1 } else { 2 });
        }
    }
}

fn load_model(spec: &str) -> Result<Model> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_model(name);
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    Ok(Model::from_json(&text)?)
}

fn builtin_model(name: &str) -> Result<Model> {
    match name {
        "squarebit" => Ok(testspace::square_bit()),
        "firefly" => Ok(testspace::firefly()),
        "grid3" => Ok(testspace::grid(3)),
        "graph3" => Ok(testspace::graph(3)?),
        _ => {
            if let Some(k) = name.strip_prefix("ngon:") {
                let k: usize = k.parse().context("ngon size")?;
                return Ok(testspace::ngon(k)?);
            }
            if let Some(n) = name.strip_prefix("classical:") {
                let n: usize = n.parse().context("classical size")?;
                return Ok(testspace::classical(n));
            }
            bail!("unknown builtin model {name:?}")
        }
    }
}

fn rat_str(r: &Rat) -> String {
    format!("{} (≈{:.6})", format_rat(r), rat_to_f64(r))
}

fn parse_vertex_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("{e}")))
        .collect()
}

fn load_composite(hull_a: &LinearHull, hull_b: &LinearHull, spec: &str) -> Result<CompositeState> {
    if let Some(b) = spec.strip_prefix("builtin:") {
        if b == "pr" {
            return Ok(pr_box(hull_a, hull_b)?);
        }
        if b == "uniform" {
            return Ok(uniform_correlator(hull_a)?);
        }
        if let Some(rest) = b.strip_prefix("product:") {
            let idx = parse_vertex_indices(rest)?;
            if idx.len() != 2 {
                bail!("builtin:product needs two vertex indices");
            }
            let va = hull_a
                .vertices()
                .get(idx[0])
                .ok_or_else(|| anyhow!("vertex {} out of range", idx[0]))?;
            let vb = hull_b
                .vertices()
                .get(idx[1])
                .ok_or_else(|| anyhow!("vertex {} out of range", idx[1]))?;
            return Ok(CompositeState::product(hull_a, hull_b, va, vb)?);
        }
        bail!("unknown builtin composite state {b:?}");
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let table_obj = raw
        .get("table")
        .and_then(|t| t.as_object())
        .ok_or_else(|| anyhow!("composite file needs a \"table\" object"))?;
    let na = hull_a.model().test_space().outcome_count();
    let nb = hull_b.model().test_space().outcome_count();
    let mut table = Matrix::zero(na, nb);
    for (key, value) in table_obj {
        let (la, lb) = key
            .split_once('|')
            .ok_or_else(|| anyhow!("table keys are \"xlabel|ylabel\", got {key:?}"))?;
        let x = hull_a
            .model()
            .test_space()
            .outcome_index(la)
            .ok_or_else(|| anyhow!("unknown outcome {la:?}"))?;
        let y = hull_b
            .model()
            .test_space()
            .outcome_index(lb)
            .ok_or_else(|| anyhow!("unknown outcome {lb:?}"))?;
        let cell = value
            .as_str()
            .ok_or_else(|| anyhow!("table values are rational strings"))?;
        table[(x, y)] = parse_rat(cell).map_err(|e| anyhow!(e))?;
    }
    Ok(CompositeState::new(hull_a, hull_b, table)?)
}

fn weight_json(w: &ProbWeight) -> serde_json::Value {
    json!(w.values().iter().map(format_rat).collect::<Vec<_>>())
}

fn guard_outcomes(limit: usize, model: &Model) -> Result<()> {
    let n = model.test_space().outcome_count();
    if n > limit {
        bail!("size guard exceeded: model has {n} outcomes, limit {limit}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::PureStates(m) => {
            let model = load_model(&m.model)?;
            guard_outcomes(cli.max_outcomes, &model)?;
            let pure = model.pure_states()?;
            if cli.json {
                let out = json!({
                    "outcomes": model.test_space().outcomes(),
                    "pure_states": pure.iter().map(weight_json).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{} pure states", pure.len());
                let labels = model.test_space().outcomes();
                for (i, w) in pure.iter().enumerate() {
                    let cells: Vec<String> = labels
                        .iter()
                        .zip(w.values())
                        .map(|(l, v)| format!("{l}={}", format_rat(v)))
                        .collect();
                    println!("  [{i}] {}", cells.join("  "));
                }
            }
            Ok(())
        }
        Command::Classify(m) => {
            let model = load_model(&m.model)?;
            guard_outcomes(cli.max_outcomes, &model)?;
            let class = model.classify_classicality()?;
            let preds = model.state_predicates()?;
            let class_str = match class {
                Classicality::Classical => "classical",
                Classicality::Partition => "partition",
                Classicality::Neither => "neither",
            };
            if cli.json {
                let out = json!({
                    "classification": class_str,
                    "unital": preds.unital,
                    "sharp": preds.sharp,
                    "separating": preds.separating,
                    "dispersion_free_states":
                        preds.dispersion_free.iter().map(weight_json).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("classification: {class_str}");
                println!(
                    "unital: {}  sharp: {}  separating: {}  dispersion-free states: {}",
                    preds.unital,
                    preds.sharp,
                    preds.separating,
                    preds.dispersion_free.len()
                );
            }
            Ok(())
        }
        Command::Tensor { pair, kind } => {
            let (ha, hb) = build_pair(&pair)?;
            let k = parse_kind(&kind)?;
            let t = min_max_tensor(&ha, &hb, k)?;
            let mut entangled = 0usize;
            for v in &t.state_vertices {
                let st = composite_from_vec(&ha, &hb, v)?;
                if matches!(is_separable(&st), Separability::Entangled(..)) {
                    entangled += 1;
                }
            }
            if cli.json {
                let out = json!({
                    "kind": kind,
                    "dim": t.dim,
                    "state_vertices": t.state_vertices.len(),
                    "entangled_vertices": entangled,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!(
                    "tensor kind {kind}: dim {}, {} extreme states ({} entangled)",
                    t.dim,
                    t.state_vertices.len(),
                    entangled
                );
            }
            Ok(())
        }
        Command::Chsh { pair, tensor } => {
            let (ha, hb) = build_pair(&pair)?;
            let k = parse_kind(&tensor)?;
            let t = min_max_tensor(&ha, &hb, k)?;
            let best = chsh_max(&ha, &hb, &t)?;
            if cli.json {
                let out = json!({
                    "s_max": format_rat(&best.value),
                    "s_max_decimal": rat_to_f64(&best.value),
                    "state_index": best.state_index,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("S_max = {}", rat_str(&best.value));
                println!("attained at extreme state #{}", best.state_index);
            }
            Ok(())
        }
        Command::Separable { pair, state } => {
            let (ha, hb) = build_pair(&pair)?;
            let omega = load_composite(&ha, &hb, &state)?;
            match is_separable(&omega) {
                Separability::Separable(mix) => {
                    if cli.json {
                        let out = json!({
                            "separable": true,
                            "decomposition": mix.iter().map(|(i, j, t)| {
                                json!({"a_vertex": i, "b_vertex": j, "weight": format_rat(t)})
                            }).collect::<Vec<_>>(),
                        });
                        println!("{}", serde_json::to_string_pretty(&out)?);
                    } else {
                        println!("separable: mixture of {} product states", mix.len());
                        for (i, j, t) in mix {
                            println!("  vertex {i} ⊗ vertex {j} with weight {}", rat_str(&t));
                        }
                    }
                }
                Separability::Entangled(w, c) => {
                    if cli.json {
                        let out = json!({
                            "separable": false,
                            "witness": w.iter().map(format_rat).collect::<Vec<_>>(),
                            "threshold": format_rat(&c),
                        });
                        println!("{}", serde_json::to_string_pretty(&out)?);
                    } else {
                        println!(
                            "entangled; witness functional (value > {} on this state):",
                            format_rat(&c)
                        );
                        let cells: Vec<String> = w.iter().map(format_rat).collect();
                        println!("  [{}]", cells.join(", "));
                    }
                }
            }
            Ok(())
        }
        Command::Clone { model, states } => {
            let m = load_model(&model.model)?;
            let hull = LinearHull::build(&m)?;
            let idx = parse_vertex_indices(&states)?;
            let coords = pick_states(&hull, &idx)?;
            match find_distinguishing_observable(&hull, &coords)? {
                Some(obs) => {
                    let cm = CloningMap::build(&hull, &coords, &obs);
                    let ok = cm.clones_exactly();
                    if cli.json {
                        let out = json!({
                            "distinguishable": true,
                            "clones_exactly": ok,
                            "observable": obs.iter().map(|a| {
                                a.iter().map(format_rat).collect::<Vec<_>>()
                            }).collect::<Vec<_>>(),
                        });
                        println!("{}", serde_json::to_string_pretty(&out)?);
                    } else {
                        println!("jointly distinguishable: cloning map built (exact: {ok})");
                    }
                }
                None => {
                    if cli.json {
                        println!("{}", json!({"distinguishable": false}));
                    } else {
                        println!("not jointly distinguishable: no cloning map exists");
                    }
                }
            }
            Ok(())
        }
        Command::Broadcast { model, states } => {
            let m = load_model(&model.model)?;
            let hull = LinearHull::build(&m)?;
            let idx = parse_vertex_indices(&states)?;
            let coords = pick_states(&hull, &idx)?;
            let tensor = min_max_tensor(&hull, &hull, TensorKind::Max)?;
            match broadcastable(&hull, &coords, &tensor)? {
                Broadcast::Yes(_) => {
                    if cli.json {
                        println!("{}", json!({"broadcastable": true}));
                    } else {
                        println!("broadcastable: joint broadcast map exists");
                    }
                }
                Broadcast::No(cert) => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "broadcastable": false,
                                "certificate_rows": cert.len(),
                            })
                        );
                    } else {
                        println!(
                            "not broadcastable (infeasibility certificate over {} rows)",
                            cert.len()
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Teleport(m) => {
            let model = load_model(&m.model)?;
            let hull = LinearHull::build(&model)?;
            // Canonical protocol: an isomorphism state of the model (PR box
            // for the square bit, uniform correlator otherwise) with the
            // matching scaled-inverse effect.
            let omega = if model == testspace::square_bit() {
                pr_box(&hull, &hull)?
            } else {
                uniform_correlator(&hull)?
            };
            let Some(iso) = omega.is_isomorphism_state()? else {
                bail!("the canonical state of this model is not an isomorphism state");
            };
            let mut f_mat = iso.inverse.transpose();
            for i in 0..f_mat.rows {
                for j in 0..f_mat.cols {
                    let v = &f_mat[(i, j)] * &iso.effect_scale;
                    f_mat[(i, j)] = v;
                }
            }
            let f = BipartiteEffect::new(&hull, &hull, f_mat)?;
            let rep = verify_teleportation(&omega, &f)?;
            let class = format!("{:?}", rep.class).to_lowercase();
            if cli.json {
                let out = json!({
                    "class": class,
                    "constant": format_rat(&rep.constant),
                    "success_scale": format_rat(&rep.success_scale),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("teleportation: {class}");
                println!("  reversal constant c = {}", rat_str(&rep.constant));
                println!("  outcome probability = {}", rat_str(&rep.success_scale));
            }
            Ok(())
        }
        Command::Steer { pair, state } => {
            let (ha, hb) = build_pair(&pair)?;
            let omega = load_composite(&ha, &hb, &state)?;
            let steering = is_steering(&omega)?;
            let face = steering_image_is_face(&omega)?;
            if cli.json {
                println!("{}", json!({"steering": steering, "image_is_face": face}));
            } else {
                println!("steering for the B marginal: {steering}");
                println!("conditioning image equals Face(marginal): {face}");
            }
            Ok(())
        }
        Command::Entropy { model, state } => {
            let m = load_model(&model.model)?;
            let hull = LinearHull::build(&m)?;
            if hull.vertices().len() > cli.max_vertices {
                bail!(
                    "size guard exceeded: {} vertices, limit {}",
                    hull.vertices().len(),
                    cli.max_vertices
                );
            }
            let w = if let Some(i) = state.strip_prefix("vertex:") {
                let i: usize = i.parse()?;
                hull.vertices()
                    .get(i)
                    .cloned()
                    .ok_or_else(|| anyhow!("vertex {i} out of range"))?
            } else {
                let vals: std::result::Result<Vector, String> =
                    state.split(',').map(|t| parse_rat(t.trim())).collect();
                ProbWeight::new(m.test_space(), vals.map_err(|e| anyhow!(e))?)?
            };
            let h = measurement_entropy(&m, &w);
            let s = mixing_entropy(&hull, &w)?;
            if cli.json {
                let out = json!({
                    "measurement_entropy_bits": h.bits,
                    "achieving_test": h.achieving_test,
                    "mixing_entropy_bits": s.bits,
                    "achieving_decomposition": s.achieving_decomposition.as_ref().map(|d| {
                        d.iter().map(|(i, t)| json!({"vertex": i, "weight": format_rat(t)}))
                            .collect::<Vec<_>>()
                    }),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!(
                    "measurement entropy H = {:.6} bits (test #{})",
                    h.bits,
                    h.achieving_test.unwrap_or(0)
                );
                println!("mixing entropy      S = {:.6} bits", s.bits);
                if let Some(d) = &s.achieving_decomposition {
                    let cells: Vec<String> = d
                        .iter()
                        .map(|(i, t)| format!("{}·v{}", format_rat(t), i))
                        .collect();
                    println!("  via {}", cells.join(" + "));
                }
            }
            Ok(())
        }
        Command::Ic { n, m, resource } => {
            let res = match resource.as_str() {
                "pr" => IcResource::PrBoxes,
                "classical" => IcResource::Classical,
                other => bail!("unknown resource {other:?} (pr or classical)"),
            };
            let run = run_information_causality(n, m, res)?;
            let violated = run.lhs_bits > m as f64 + 1e-9;
            if cli.json {
                let out = json!({
                    "n": run.n,
                    "m": run.m,
                    "per_k_bits": run.per_k_bits,
                    "lhs_bits": run.lhs_bits,
                    "violated": violated,
                    "correct_probability": run.correct_probability.iter()
                        .map(format_rat).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                if violated {
                    println!("lhs = {} > m = {m}: IC violated", run.lhs_bits);
                } else {
                    println!("lhs = {} <= m = {m}: IC respected", run.lhs_bits);
                }
                for (k, bits) in run.per_k_bits.iter().enumerate() {
                    println!(
                        "  I(e_{k} : b_{k} | G={k}) = {bits:.6} bits, correct with p = {}",
                        format_rat(&run.correct_probability[k])
                    );
                }
            }
            Ok(())
        }
        Command::Jordan {
            kind,
            samples,
            seed,
        } => {
            let kind = parse_jordan_kind(&kind)?;
            let sys = JordanSystem::new(kind);
            let model = QuantumModel::new(sys);
            let self_dual = sys.self_duality_check(samples.min(100), seed);
            let rep = jordan_model_checks(&model, samples.min(50), seed);
            let chsh = if kind == JordanKind::ComplexHerm(4) {
                let (v, _) = quantum_chsh_optimize(&singlet());
                Some(v)
            } else {
                None
            };
            if cli.json {
                let out = json!({
                    "dim": sys.dim(),
                    "rank": sys.rank(),
                    "self_dual": self_dual,
                    "uniform_rank": rep.uniform_rank,
                    "outcomes_primitive": rep.outcomes_primitive,
                    "sharp": rep.sharp,
                    "max_residual": rep.max_residual,
                    "chsh_singlet": chsh,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("dim = {}, rank = {}", sys.dim(), sys.rank());
                println!("trace-form self-dual: {self_dual}");
                println!(
                    "frames: uniform rank {}, primitive outcomes {}, sharp {}",
                    rep.uniform_rank, rep.outcomes_primitive, rep.sharp
                );
                println!("max residual: {:.3e}", rep.max_residual);
                if let Some(v) = chsh {
                    println!("two-qubit CHSH optimum: {v:.9} (2√2 ≈ 2.828427125)");
                }
            }
            Ok(())
        }
        Command::Greechie(m) => {
            let model = load_model(&m.model)?;
            print!("{}", model.test_space().to_dot());
            Ok(())
        }
    }
}

fn build_pair(pair: &PairArg) -> Result<(LinearHull, LinearHull)> {
    let a = load_model(&pair.a)?;
    let b = load_model(&pair.b)?;
    Ok((LinearHull::build(&a)?, LinearHull::build(&b)?))
}

fn parse_kind(s: &str) -> Result<TensorKind> {
    match s {
        "min" => Ok(TensorKind::Min),
        "max" => Ok(TensorKind::Max),
        other => bail!("unknown tensor kind {other:?} (min or max)"),
    }
}

fn parse_jordan_kind(s: &str) -> Result<JordanKind> {
    let (family, n) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("jordan kind is family:N, e.g. complex:2"))?;
    let n: usize = n.parse().context("jordan size")?;
    if n == 0 {
        bail!("jordan size must be positive");
    }
    match family {
        "real" => Ok(JordanKind::RealSym(n)),
        "complex" => Ok(JordanKind::ComplexHerm(n)),
        "quat" => Ok(JordanKind::QuatHerm(n)),
        "spin" => Ok(JordanKind::Spin(n)),
        other => bail!("unknown jordan family {other:?}"),
    }
}

fn pick_states(hull: &LinearHull, idx: &[usize]) -> Result<Vec<Vector>> {
    idx.iter()
        .map(|&i| {
            hull.state_vectors()
                .get(i)
                .cloned()
                .ok_or_else(|| anyhow!("vertex {i} out of range"))
        })
        .collect()
}

fn composite_from_vec(ha: &LinearHull, hb: &LinearHull, v: &[Rat]) -> Result<CompositeState> {
    let mut m = Matrix::zero(ha.dim(), hb.dim());
    for i in 0..ha.dim() {
        for j in 0..hb.dim() {
            m[(i, j)] = v[i * hb.dim() + j].clone();
        }
    }
    Ok(CompositeState::from_bilinear(ha, hb, &m)?)
}
