use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cobweb::manifold::{edge_cycles, first_homology, presentation, HomologyReport, PresentationForm};
use cobweb::relations::printed_three_generator;
use cobweb::svg::{render_svg, Projection, SvgOptions};
use cobweb::orthoscheme::{circumradius_of, inradius_of};
use cobweb::verify::{verify_scheme, Tolerances, VerificationReport};
use cobweb::{
    classify, densities, kellerhals_volume, realize, AbelianGroup, Cell64, Error,
    FacePairingScheme, Geometry, OrthoschemeClass, Presentation, RadiusReport, SchlafliTriple, VertexState,
};

const CAVEAT: &str = "metric data only: no face pairing is constructed or claimed for these symbols";

#[derive(Parser)]
#[command(name = "cobweb", version, about = "Cobweb manifolds from complete hyperbolic orthoschemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON at full precision.
    #[arg(long, global = true)]
    json: bool,
    /// Relation acceptance tolerance.
    #[arg(long, global = true, value_name = "TOL")]
    tol_rel: Option<f64>,
    /// Write output to a file instead of stdout.
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Face-pairing scheme (defaults to the bundled Cw(6,6,6) scheme).
    #[arg(long, global = true, value_name = "PATH")]
    scheme: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct SymbolArgs {
    u: u32,
    v: u32,
    w: u32,
}

impl SymbolArgs {
    fn symbol(self) -> Result<SchlafliTriple, Error> {
        SchlafliTriple::new(self.u, self.v, self.w)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PresentationArg {
    Full,
    #[value(name = "4gen")]
    FourGen,
    #[value(name = "3gen")]
    ThreeGen,
}

impl From<PresentationArg> for PresentationForm {
    fn from(p: PresentationArg) -> Self {
        match p {
            PresentationArg::Full => PresentationForm::Full,
            PresentationArg::FourGen => PresentationForm::FourGenerator,
            PresentationArg::ThreeGen => PresentationForm::ThreeGenerator,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectionArg {
    Xy,
    Xz,
    Yz,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum SurveyFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry, vertex states, determinant and signature of a symbol.
    Classify(SymbolArgs),
    /// In- and circumradius, height and vertex distances of the cell.
    Metrics(SymbolArgs),
    /// Orthoscheme and manifold volume with packing and covering densities.
    Volume(SymbolArgs),
    /// Check a face-pairing scheme against the constructed cell.
    Verify(SymbolArgs),
    /// First homology of the face-pairing presentation.
    Homology {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, value_enum, default_value = "4gen")]
        presentation: PresentationArg,
    },
    /// Metric data for Cw(2p,2p,2p) over a list of p.
    Survey {
        #[arg(required = true)]
        p: Vec<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: SurveyFormat,
    },
    /// SVG snapshot of the cell in the Klein model.
    Svg {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, value_enum, default_value = "xy")]
        projection: ProjectionArg,
        #[arg(long, default_value_t = 600)]
        size: u32,
    },
}

enum Outcome {
    Pass,
    Fail,
}

struct Ctx {
    json: bool,
    tol: Tolerances,
    scheme: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match tolerances(cli.tol_rel) {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let ctx = Ctx { json: cli.json, tol, scheme: cli.scheme.clone() };
    let result = run(&cli.command, &ctx).and_then(|(text, outcome)| {
        match &cli.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(outcome)
    });
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => usage_error(&e),
    }
}

fn usage_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    eprintln!("usage: cobweb <classify|metrics|volume|verify|homology|survey|svg> [args] [--json] [--tol-rel TOL] [-o PATH] [--scheme PATH]");
    ExitCode::from(2)
}

fn tolerances(tol_rel: Option<f64>) -> Result<Tolerances, Error> {
    let mut tol = match std::env::var("COBWEB_TOL") {
        Ok(s) if !s.trim().is_empty() => Tolerances::parse(&s)?,
        _ => Tolerances::default(),
    };
    if let Some(r) = tol_rel {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Schema(format!("--tol-rel must be positive, got {r}")));
        }
        tol.relation = r;
    }
    Ok(tol)
}

fn run(command: &Command, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    match command {
        Command::Classify(s) => classify_cmd(s.symbol()?, ctx),
        Command::Metrics(s) => metrics_cmd(s.symbol()?, ctx),
        Command::Volume(s) => volume_cmd(s.symbol()?, ctx),
        Command::Verify(s) => verify_cmd(s.symbol()?, ctx),
        Command::Homology { symbol, presentation } => homology_cmd(symbol.symbol()?, (*presentation).into(), ctx),
        Command::Survey { p, format } => {
            let format = if ctx.json { SurveyFormat::Json } else { *format };
            survey_cmd(p, format)
        }
        Command::Svg { symbol, projection, size } => {
            let projection = match projection {
                ProjectionArg::Xy => Projection::Xy,
                ProjectionArg::Xz => Projection::Xz,
                ProjectionArg::Yz => Projection::Yz,
            };
            svg_cmd(symbol.symbol()?, SvgOptions { projection, size: *size })
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn geometry_name(g: Geometry) -> &'static str {
    match g {
        Geometry::Spherical => "spherical",
        Geometry::Euclidean => "euclidean",
        Geometry::Hyperbolic => "hyperbolic",
    }
}

fn state_name(s: VertexState) -> &'static str {
    match s {
        VertexState::Proper => "proper",
        VertexState::Ideal => "ideal",
        VertexState::Outer => "outer",
    }
}

fn class_name(c: &OrthoschemeClass) -> &'static str {
    if c.complete_truncated {
        "complete truncated orthoscheme"
    } else if c.geometry == Geometry::Hyperbolic && c.vertex_state.iter().all(|s| *s == VertexState::Proper) {
        "compact orthoscheme (honeycomb)"
    } else if c.geometry == Geometry::Hyperbolic {
        "hyperbolic orthoscheme with ideal or outer vertices"
    } else {
        "not hyperbolic"
    }
}

fn classify_cmd(symbol: SchlafliTriple, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    let c = classify::<f64>(symbol);
    if ctx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            class: &'a OrthoschemeClass,
            description: &'a str,
        }
        return Ok((json(&Out { class: &c, description: class_name(&c) })?, Outcome::Pass));
    }
    let mut s = String::new();
    let _ = writeln!(s, "symbol         {symbol}");
    let _ = writeln!(s, "geometry      {}", geometry_name(c.geometry));
    let _ = writeln!(s, "determinant   {:.5}", c.determinant);
    let _ = writeln!(s, "signature     {}", c.signature);
    let states: Vec<String> =
        c.vertex_state.iter().enumerate().map(|(i, v)| format!("A{i} {}", state_name(*v))).collect();
    let _ = writeln!(s, "vertices      {}", states.join(", "));
    let _ = writeln!(s, "class         {}", class_name(&c));
    Ok((s, Outcome::Pass))
}

#[derive(Serialize)]
struct MetricsReport {
    symbol: SchlafliTriple,
    inradius: RadiusReport,
    circumradius: RadiusReport,
    diameter: f64,
    height: f64,
    a1a2: f64,
    a1a2_cosh: f64,
}

fn metrics(symbol: SchlafliTriple) -> Result<MetricsReport, Error> {
    classify::<f64>(symbol).require_complete_truncated()?;
    let t = realize::<f64>(symbol)?;
    let inradius = inradius_of(&t)?;
    let circumradius = circumradius_of(&t)?;
    Ok(MetricsReport {
        symbol,
        diameter: 2.0 * circumradius.value,
        inradius,
        circumradius,
        height: t.height()?,
        a1a2: t.vertex_distance(1, 2)?,
        a1a2_cosh: t.vertex_cosh(1, 2),
    })
}

fn radius_lines(s: &mut String, label: &str, r: &RadiusReport) {
    let _ = writeln!(s, "{label:<15}{:.5}  (attained by {})", r.value, r.attained_by);
    let cands: Vec<String> = r.candidates.iter().map(|c| format!("{} {:.5}", c.name, c.value)).collect();
    let _ = writeln!(s, "  candidates  {}", cands.join(", "));
    let _ = write!(s, "  closed form {:.5}", r.closed_form);
    if let Some(a) = r.alternate_form {
        let _ = write!(s, ", alternate {a:.5}");
    }
    let _ = writeln!(s);
}

fn metrics_cmd(symbol: SchlafliTriple, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    let m = metrics(symbol)?;
    if ctx.json {
        return Ok((json(&m)?, Outcome::Pass));
    }
    let mut s = String::new();
    let _ = writeln!(s, "symbol         {symbol}");
    radius_lines(&mut s, "inradius r", &m.inradius);
    radius_lines(&mut s, "circumradius R", &m.circumradius);
    let _ = writeln!(s, "diameter 2R    {:.5}", m.diameter);
    let _ = writeln!(s, "height 2QA2    {:.5}", m.height);
    let _ = writeln!(s, "A1A2           {:.5}  (cosh {:.5})", m.a1a2, m.a1a2_cosh);
    Ok((s, Outcome::Pass))
}

#[derive(Serialize)]
struct VolumeOut {
    symbol: SchlafliTriple,
    orthoscheme_volume: f64,
    #[serde(flatten)]
    cobweb: Option<cobweb::VolumeReport>,
}

fn volume_cmd(symbol: SchlafliTriple, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    classify::<f64>(symbol).require_complete_truncated()?;
    let ortho = kellerhals_volume::<f64>(symbol)?;
    let cobweb = symbol.cobweb_p().ok().map(|_| densities(symbol)).transpose()?;
    if ctx.json {
        let out = match cobweb {
            Some(r) => json(&r)?,
            None => json(&VolumeOut { symbol, orthoscheme_volume: ortho, cobweb: None })?,
        };
        return Ok((out, Outcome::Pass));
    }
    let mut s = String::new();
    let _ = writeln!(s, "symbol              {symbol}");
    let _ = writeln!(s, "Vol(W)              {ortho:.5}");
    if let Some(r) = cobweb {
        let p = symbol.cobweb_p()?;
        let _ = writeln!(s, "theta               {:.5}", r.theta);
        let _ = writeln!(s, "Vol(Cw) = {}·Vol(W)  {:.5}", 4 * p, r.manifold_volume);
        let _ = writeln!(s, "inball volume       {:.5}  (r = {:.5})", r.inball_volume, r.inradius);
        let _ = writeln!(s, "coverball volume    {:.5}  (R = {:.5})", r.coverball_volume, r.circumradius);
        let _ = writeln!(s, "packing density     {:.5}", r.packing_density);
        let _ = writeln!(s, "covering density    {:.5}", r.covering_density);
    }
    Ok((s, Outcome::Pass))
}

fn load_scheme(symbol: SchlafliTriple, ctx: &Ctx) -> Result<FacePairingScheme, Error> {
    match &ctx.scheme {
        Some(path) => FacePairingScheme::from_json(&std::fs::read_to_string(path)?),
        None if symbol.cobweb_p().ok() == Some(3) => FacePairingScheme::bundled_cw666(),
        None => Err(Error::Schema(format!("no bundled scheme for {symbol}; pass --scheme PATH"))),
    }
}

fn build_cell(symbol: SchlafliTriple) -> Result<Cell64, Error> {
    symbol.cobweb_p()?;
    Cell64::build(&realize(symbol)?)
}

fn verify_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let [u, v, w] = r.symbol;
    let _ = writeln!(s, "scheme for Cw({u},{v},{w}): {} faces, {} pairs, {} edges, {} vertices", r.faces, r.pairs, r.edges, r.vertices);
    let lengths: Vec<String> = r.cycle_lengths.iter().map(|(len, n)| format!("{n}×{len}")).collect();
    let _ = writeln!(s, "edge classes    {} ({})", r.edge_cycles.len(), lengths.join(" + "));
    let mut sizes = r.vertex_class_sizes.clone();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let sizes: Vec<String> = sizes.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "vertex classes  {} (sizes {})", r.vertex_class_sizes.len(), sizes.join(", "));
    if let Some(chi) = r.euler_characteristic {
        let _ = writeln!(s, "euler char.     {chi}");
    }
    if let Some(d) = r.worst_angle_deviation {
        let _ = writeln!(s, "angle sums      worst deviation from 2π {d:.3e}");
    }
    for c in &r.checks {
        let _ = writeln!(s, "{} {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
    s
}

fn verify_cmd(symbol: SchlafliTriple, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    let scheme = load_scheme(symbol, ctx)?;
    let cell = build_cell(symbol)?;
    let report = verify_scheme(&cell, &scheme, &ctx.tol)?;
    let outcome = if report.passed { Outcome::Pass } else { Outcome::Fail };
    let text = if ctx.json { json(&report)? } else { verify_text(&report) };
    Ok((text, outcome))
}

#[derive(Serialize)]
struct HomologyOut {
    homology: HomologyReport,
    relators: Vec<String>,
    reference_group: String,
    isomorphic_to_reference: bool,
    three_generator_two_relators: HomologyReport,
    three_generator_with_eighteen_letter: HomologyReport,
}

fn homology_cmd(symbol: SchlafliTriple, form: PresentationForm, ctx: &Ctx) -> Result<(String, Outcome), Error> {
    let scheme = load_scheme(symbol, ctx)?;
    let t = scheme.validate()?;
    let cycles = edge_cycles(&t)?;
    let p = presentation(&t, &cycles, form)?;
    let h = first_homology(&p)?;
    let reference = AbelianGroup::from_cyclic_orders(0, &[3, 6, 12]);
    let ours = p.homology()?;
    let gens: Vec<String> = ["a1", "a2", "s"].iter().map(|s| s.to_string()).collect();
    let two = first_homology(&Presentation::new(PresentationForm::ThreeGenerator, gens.clone(), printed_three_generator(false)?))?;
    let three = first_homology(&Presentation::new(PresentationForm::ThreeGenerator, gens, printed_three_generator(true)?))?;
    let out = HomologyOut {
        relators: p.relators.iter().map(|r| r.to_string()).collect(),
        reference_group: reference.to_string(),
        isomorphic_to_reference: ours.is_isomorphic(&reference),
        homology: h,
        three_generator_two_relators: two,
        three_generator_with_eighteen_letter: three,
    };
    let outcome = if out.homology.snf_verified { Outcome::Pass } else { Outcome::Fail };
    if ctx.json {
        return Ok((json(&out)?, outcome));
    }
    let h = &out.homology;
    let mut s = String::new();
    let _ = writeln!(s, "presentation    {} generators ({}), {} relators", h.generators.len(), h.generators.join(", "), out.relators.len());
    for r in &out.relators {
        let _ = writeln!(s, "  {r} = 1");
    }
    let _ = writeln!(s, "abelianized");
    for row in &h.matrix {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
        let _ = writeln!(s, "  [{} ]", cells.join(""));
    }
    let _ = writeln!(s, "invariant factors  ({})", h.invariant_factors.join(", "));
    let _ = writeln!(s, "H1              {} (torsion order {}, free rank {})", h.group, h.torsion_order, h.free_rank);
    let _ = writeln!(s, "SNF verified    {}", if h.snf_verified { "yes" } else { "no" });
    let _ = writeln!(
        s,
        "isomorphic to {}: {}",
        out.reference_group,
        if out.isomorphic_to_reference { "yes" } else { "no" }
    );
    let _ = writeln!(
        s,
        "printed 3-generator form, two relators: {} ; with the 18-letter relator: {}",
        out.three_generator_two_relators.group, out.three_generator_with_eighteen_letter.group
    );
    Ok((s, outcome))
}

#[derive(Serialize)]
struct SurveyRow {
    p: u32,
    symbol: SchlafliTriple,
    geometry: Geometry,
    complete_truncated: bool,
    inradius: f64,
    circumradius: f64,
    orthoscheme_volume: f64,
    manifold_volume: f64,
    packing_density: f64,
    covering_density: f64,
}

fn survey_cmd(ps: &[u32], format: SurveyFormat) -> Result<(String, Outcome), Error> {
    let mut rows = Vec::new();
    for &p in ps {
        let symbol = SchlafliTriple::cobweb(p)?;
        let c = classify::<f64>(symbol);
        c.require_complete_truncated()?;
        let r = densities(symbol)?;
        rows.push(SurveyRow {
            p,
            symbol,
            geometry: c.geometry,
            complete_truncated: c.complete_truncated,
            inradius: r.inradius,
            circumradius: r.circumradius,
            orthoscheme_volume: r.orthoscheme_volume,
            manifold_volume: r.manifold_volume,
            packing_density: r.packing_density,
            covering_density: r.covering_density,
        });
    }
    if format == SurveyFormat::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            caveat: &'a str,
            rows: Vec<SurveyRow>,
        }
        return Ok((json(&Out { caveat: CAVEAT, rows })?, Outcome::Pass));
    }
    let mut w = csv::Writer::from_writer(format!("# {CAVEAT}\n").into_bytes());
    w.write_record(["p", "symbol", "geometry", "complete_truncated", "r", "R", "vol_w", "vol_cw", "packing_density", "covering_density"])
        .map_err(csv_error)?;
    for r in rows {
        let numbers = [
            r.inradius,
            r.circumradius,
            r.orthoscheme_volume,
            r.manifold_volume,
            r.packing_density,
            r.covering_density,
        ];
        let mut record =
            vec![r.p.to_string(), r.symbol.to_string(), geometry_name(r.geometry).to_string(), r.complete_truncated.to_string()];
        record.extend(numbers.iter().map(f64::to_string));
        w.write_record(&record).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
    let s = String::from_utf8(bytes).map_err(|e| Error::Schema(e.to_string()))?;
    Ok((s, Outcome::Pass))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Schema(format!("csv: {e}"))
}

fn svg_cmd(symbol: SchlafliTriple, options: SvgOptions) -> Result<(String, Outcome), Error> {
    let cell = build_cell(symbol)?;
    Ok((render_svg(&cell, &options)?, Outcome::Pass))
}
