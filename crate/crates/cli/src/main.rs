//! `nambu`: check Nambu structures on Lie algebroids described by model files.

mod render;

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nambu_core::elw;
use nambu_core::leibniz::LeibnizAlgebroid;
use nambu_core::library::{self, EXAMPLES};
use nambu_core::model::{self, Model};
use nambu_core::modular;
use nambu_core::nambu;
use nambu_core::suite::{self, Suite};
use nambu_core::{parse_expr, Algebroid, Error, NambuStructure, Variance, VerificationReport, ZeroConfig};

use render::Outcome;

#[derive(Parser)]
#[command(name = "nambu", version, about = "Nambu structures, Leibniz algebroids and modular classes on Lie algebroids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled zero tests and randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample points for the probabilistic zero test.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Relative tolerance of the probabilistic zero test, e.g. 1e-9 or 1/1000.
    #[arg(long, global = true, value_parser = parse_tolerance)]
    tolerance: Option<f64>,
    /// Accept order-2 structures.
    #[arg(long, global = true)]
    allow_order_2: bool,
    /// Assume the dual sections are locally generated by differentials of functions.
    #[arg(long, global = true)]
    assume_exact_generation: bool,
    /// Include elapsed times in the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and check the algebroid axioms.
    Validate { model: String },
    /// Check the Nambu condition on the model's multivector.
    NambuCheck { model: String },
    /// Check Wade's condition on the model's multivector.
    WadeCheck { model: String },
    /// Check pointwise decomposability.
    Decomposable { model: String },
    /// Bracket of two (n-1)-forms in the induced Leibniz algebroid.
    Bracket {
        model: String,
        /// First form, e.g. "1,2=x1; 2,3=1".
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Use Wade's bracket instead.
        #[arg(long)]
        wade: bool,
    },
    /// Schouten bracket of two multivectors.
    Schouten {
        model: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Algebroid differential of a form.
    #[command(name = "dA")]
    DA {
        model: String,
        #[arg(long)]
        form: String,
    },
    /// Modular tensor field of the model's structure and volume.
    Modular { model: String },
    /// Modular tensor after rescaling the volume by exp(g).
    VolumeChange {
        model: String,
        #[arg(long)]
        g: String,
    },
    /// The 1-cocycle condition for the modular tensor.
    Cocycle {
        model: String,
        /// Report the residual for Wade's bracket.
        #[arg(long)]
        wade: bool,
    },
    /// Subordinate structure from the model's closed 1-forms.
    Subordinate { model: String },
    /// Invariance of exp(-g) mu under Hamiltonian sections.
    Hamiltonian {
        model: String,
        /// Potential g; defaults to the model's [hamiltonian] section.
        #[arg(long)]
        potential: Option<String>,
    },
    /// Compare the intrinsic modular class with the Nambu one.
    ElwCompare { model: String },
    /// Run a verification suite.
    Verify {
        model: String,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
    /// List or print the built-in example models.
    Examples {
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long, value_name = "NAME")]
        emit: Option<String>,
    },
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let d: f64 = d.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            n / d
        }
        None => s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive, got `{s}`"))
    }
}

/// A path to a model file, or the name of a built-in example. A missing
/// path whose stem names a built-in falls back to that example.
fn load_model(spec: &str) -> Result<Model, Error> {
    let name = spec.strip_prefix("builtin:").unwrap_or(spec);
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Model(format!("cannot read {spec}: {e}")))?;
        return Model::parse(&text);
    }
    if library::find(name).is_some() {
        return library::load(name);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    if path.extension().is_some_and(|e| e == "toml") && library::find(stem).is_some() {
        return library::load(stem);
    }
    Err(Error::Model(format!("no model file or built-in example named `{spec}`")))
}

struct Ctx {
    model: Model,
    a: Algebroid,
    cfg: ZeroConfig,
    global: Global,
}

impl Ctx {
    fn new(spec: &str, global: &Global) -> Result<Self, Error> {
        let model = load_model(spec)?;
        let a = model.algebroid()?;
        let mut cfg = ZeroConfig::default();
        if let Some(s) = global.seed {
            cfg.seed = s;
        }
        if let Some(n) = global.samples {
            cfg.samples = n;
        }
        if let Some(t) = global.tolerance {
            cfg.tolerance = t;
        }
        Ok(Ctx {
            model,
            a,
            cfg,
            global: global.clone(),
        })
    }

    fn structure(&self) -> Result<NambuStructure, Error> {
        self.model.nambu_structure(&self.a, self.global.allow_order_2)
    }

    /// The structure after a passing Nambu check.
    fn verified(&self) -> Result<NambuStructure, Error> {
        let mut ns = self.structure()?;
        let r = ns.verify(&self.a, &self.cfg);
        if !r.passed() {
            let w = r.witnesses.first().map(|w| format!(" at {}", w.element)).unwrap_or_default();
            return Err(Error::Nambu(format!("the model's multivector fails the Nambu check{w}")));
        }
        Ok(ns)
    }

    fn exterior(&self, text: &str, variance: Variance) -> Result<nambu_core::ExteriorTensor, Error> {
        model::parse_exterior(text, variance, self.a.rank(), self.a.chart())
    }

    fn outcome(&self, command: &str, reports: Vec<VerificationReport>) -> Outcome {
        Outcome {
            model: self.model.name.clone(),
            command: command.to_string(),
            reports,
        }
    }
}

fn value_report(check: &str, key: &str, value: String) -> VerificationReport {
    VerificationReport::merge(check, &[]).value(key, value)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Validate { model } => {
            let cx = Ctx::new(model, g)?;
            let mut reports = vec![cx.a.validate_axioms(&cx.cfg)];
            if cx.model.nambu.is_some() {
                let ns = cx.structure()?;
                reports.push(value_report("nambu-section", "order", ns.order().to_string()));
            }
            cx.outcome("validate", reports)
        }
        Command::NambuCheck { model } => {
            let cx = Ctx::new(model, g)?;
            let mut ns = cx.structure()?;
            let r = ns.verify(&cx.a, &cx.cfg);
            cx.outcome("nambu-check", vec![r])
        }
        Command::WadeCheck { model } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.structure()?;
            cx.outcome("wade-check", vec![nambu::check_wade(&cx.a, &ns, &cx.cfg)])
        }
        Command::Decomposable { model } => {
            let cx = Ctx::new(model, g)?;
            let mut ns = cx.structure()?;
            let mut r = nambu::check_pointwise_decomposability(&cx.a, &ns, &cx.cfg);
            if g.assume_exact_generation && !r.passed() && ns.verify(&cx.a, &cx.cfg).passed() {
                r = r.note(
                    "assuming local generation by exact forms, a Nambu structure is decomposable; \
                     the failure above contradicts that assumption for this model",
                );
            } else if g.assume_exact_generation {
                r = r.note("assuming local generation by exact forms");
            }
            cx.outcome("decomposable", vec![r])
        }
        Command::Bracket { model, alpha, beta, wade } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let l = LeibnizAlgebroid::new(&cx.a, &ns)?;
            let (x, y) = (cx.exterior(alpha, Variance::Form)?, cx.exterior(beta, Variance::Form)?);
            let b = if *wade { l.wade_bracket(&x, &y)? } else { l.bracket(&x, &y)? };
            let name = if *wade { "wade-bracket" } else { "bracket" };
            cx.outcome(name, vec![value_report(name, "value", cx.a.names().tensor(&b))])
        }
        Command::Schouten { model, p, q } => {
            let cx = Ctx::new(model, g)?;
            let (p, q) = (cx.exterior(p, Variance::Multivector)?, cx.exterior(q, Variance::Multivector)?);
            let s = cx.a.schouten(&p, &q);
            cx.outcome("schouten", vec![value_report("schouten", "value", cx.a.names().tensor(&s))])
        }
        Command::DA { model, form } => {
            let cx = Ctx::new(model, g)?;
            let f = cx.exterior(form, Variance::Form)?;
            let d = cx.a.d(&f);
            cx.outcome("dA", vec![value_report("dA", "value", cx.a.names().tensor(&d))])
        }
        Command::Modular { model } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let mu = cx.model.volume_section(&cx.a, &cx.cfg)?;
            let mt = modular::modular_tensor(&cx.a, &ns, &mu, &cx.cfg)?;
            let mut r = modular::defining_relation_check(&cx.a, ns.tensor(), &mt.tensor, &mu, &cx.cfg)
                .value("M", cx.a.names().tensor(&mt.tensor));
            if let Some(want) = cx.model.expected_modular_tensor() {
                let diff = &mt.tensor - &want;
                let ok = diff.decide(&cx.cfg).0.is_zero();
                r = r.value("expected", cx.a.names().tensor(&want));
                if !ok {
                    r = VerificationReport::merge(
                        "modular",
                        &[r, VerificationReport::failure("modular-expected", "M - expected", cx.a.names().tensor(&diff))],
                    );
                }
            }
            cx.outcome("modular", vec![r])
        }
        Command::VolumeChange { model, g: expr } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let mu = cx.model.volume_section(&cx.a, &cx.cfg)?;
            let mt = modular::modular_tensor(&cx.a, &ns, &mu, &cx.cfg)?;
            let gs = parse_expr(expr, cx.a.chart())?;
            let (new, r) = modular::volume_change(&cx.a, &mt, &gs, &cx.cfg);
            let r = r
                .value("M", cx.a.names().tensor(&mt.tensor))
                .value("M after rescaling", cx.a.names().tensor(&new.tensor));
            cx.outcome("volume-change", vec![r])
        }
        Command::Cocycle { model, wade } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let mu = cx.model.volume_section(&cx.a, &cx.cfg)?;
            let mt = modular::modular_tensor(&cx.a, &ns, &mu, &cx.cfg)?;
            cx.outcome("cocycle", vec![modular::cocycle_check(&cx.a, &ns, &mt, *wade, &cx.cfg)?])
        }
        Command::Subordinate { model } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let forms = cx.model.subordinate_forms();
            if forms.is_empty() {
                return Err(Error::MissingSection("subordinate".into()));
            }
            let sub = nambu::subordinate(&cx.a, &ns, &forms, &cx.cfg)?;
            let mut reports = vec![nambu::check_nambu(&cx.a, &sub, &cx.cfg).value("Pi~", cx.a.names().tensor(sub.tensor()))];
            let mu = cx.model.volume_section(&cx.a, &cx.cfg)?;
            reports.push(modular::subordinate_modular_check(&cx.a, &ns, &forms, &mu, &cx.cfg)?);
            cx.outcome("subordinate", reports)
        }
        Command::Hamiltonian { model, potential } => {
            let cx = Ctx::new(model, g)?;
            let ns = cx.verified()?;
            let gs = match potential {
                Some(p) => parse_expr(p, cx.a.chart())?,
                None => cx.model.hamiltonian.clone().ok_or_else(|| Error::MissingSection("hamiltonian".into()))?,
            };
            let mu = cx.model.volume_section(&cx.a, &cx.cfg)?;
            cx.outcome("hamiltonian", vec![modular::hamiltonian_invariance_check(&cx.a, &ns, &mu, &gs, &cx.cfg)?])
        }
        Command::ElwCompare { model } => {
            let cx = Ctx::new(model, g)?;
            let coframe = cx.model.coframe_of(&cx.a, &cx.cfg)?;
            let declared = cx.model.volume.as_ref().is_some_and(|v| v.nonvanishing);
            let pi = cx.model.nambu_tensor()?;
            let mut reports = vec![elw::compare_theorem(&cx.a, &pi, &coframe, declared, &cx.cfg)?];
            let ns = cx.verified()?;
            let l = LeibnizAlgebroid::new(&cx.a, &ns)?;
            reports.push(elw::lemma_check(&l, &coframe, &cx.cfg)?);
            cx.outcome("elw-compare", reports)
        }
        Command::Verify { model, suite: name } => {
            let cx = Ctx::new(model, g)?;
            let which: Suite = name.parse()?;
            let opts = suite::Options {
                cfg: cx.cfg.clone(),
                allow_order_2: g.allow_order_2,
                ..Default::default()
            };
            let reports = suite::run(&cx.model, which, &opts)?;
            cx.outcome(&format!("verify --suite {which}"), reports)
        }
        Command::Examples { list, emit } => return examples(*list, emit.as_deref()),
    };
    Ok(out)
}

fn examples(list: bool, emit: Option<&str>) -> Result<Outcome, Error> {
    let text = match emit {
        Some(name) => library::load(name)?.emit(),
        None if list => {
            let mut s = String::new();
            for e in EXAMPLES {
                let m = Model::parse(e.source)?;
                s.push_str(&format!("{:<26} {}\n", e.name, m.description));
            }
            s
        }
        None => return Err(Error::Unsupported("pass --list or --emit NAME".into())),
    };
    print!("{text}");
    Ok(Outcome::default())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if matches!(cli.command, Command::Examples { .. }) {
                return ExitCode::SUCCESS;
            }
            render::print(&out, cli.global.json, cli.global.timing);
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            if cli.global.json {
                println!("{}", serde_json::json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
