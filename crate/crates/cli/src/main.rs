use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use matching_arrangement::{
    build_matching_arrangement, build_skeleton, characteristic_polynomial, enumerate_lp_orientations,
    enumerate_matchings, enumerate_regions, enumerate_sequences, orientation_properties, parse_graph, verify_bijection,
    Arrangement, Error, Graph, SequenceKind, Skeleton, DEFAULT_SEQUENCE_CAP,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "matcharr", version, about = "Matching arrangements, matching polytopes and their LP-orientations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Edge list, one `u v` pair per line; `-` reads standard input
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the sampling in `verify`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sampled points per region in `verify`
    #[arg(long, global = true, default_value_t = 5)]
    samples: usize,

    /// Refuse graphs with more edges
    #[arg(long, global = true, default_value_t = 10)]
    max_edges: usize,

    /// Refuse graphs with more paths and even cycles
    #[arg(long, global = true, default_value_t = DEFAULT_SEQUENCE_CAP)]
    max_sequences: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// All matchings as sorted edge-index lists
    Matchings,
    /// Hyperplanes of the matching arrangement
    Hyperplanes,
    /// Regions of the matching arrangement with witness points
    Regions,
    /// Characteristic polynomial of the matching arrangement
    Charpoly,
    /// Vertices and edges of the matching-polytope skeleton
    Skeleton,
    /// Distinct LP-orientations of the skeleton
    Orientations,
    /// Check the region/orientation bijection
    Verify,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

enum Failure {
    Domain(String),
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read_graph(cli: &Cli) -> Result<Graph, Failure> {
    let path = cli.input.as_ref().ok_or_else(|| Failure::Domain("missing --input PATH".into()))?;
    let text =
        if path.as_os_str() == "-" { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) }
            .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let g = parse_graph(&text)?;
    if g.edge_count() > cli.max_edges {
        return Err(Error::TooManyEdges { edges: g.edge_count(), limit: cli.max_edges }.into());
    }
    Ok(g)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn no_dot(command: &str) -> Failure {
    Failure::Domain(format!("{command} has no dot output; use --format json or text"))
}

fn edge_labels(g: &Graph) -> Vec<[&str; 2]> {
    g.edges().iter().map(|&(a, b)| [g.label(a), g.label(b)]).collect()
}

fn arrangement(cli: &Cli, g: &Graph) -> Result<Arrangement, Failure> {
    Ok(build_matching_arrangement(g, cli.max_sequences)?)
}

fn matchings(cli: &Cli, g: &Graph) -> Outcome {
    let all = enumerate_matchings(g);
    #[derive(Serialize)]
    struct Out<'a> {
        edges: Vec<[&'a str; 2]>,
        count: usize,
        matchings: &'a [matching_arrangement::Matching],
    }
    match cli.format {
        Format::Json => Ok(json(&Out { edges: edge_labels(g), count: all.len(), matchings: &all })),
        Format::Text => Ok(all.iter().map(|m| format!("{m}\n")).collect()),
        Format::Dot => Err(no_dot("matchings")),
    }
}

fn hyperplanes(cli: &Cli, g: &Graph) -> Outcome {
    let a = arrangement(cli, g)?;
    let mut sequences = vec![None; a.len()];
    for seq in enumerate_sequences(g, cli.max_sequences)? {
        let h = matching_arrangement::sequence_to_hyperplane(&seq, g.edge_count());
        let index = a.position(h.normal()).expect("every sequence gives a hyperplane");
        sequences[index] = Some(seq);
    }
    #[derive(Serialize)]
    struct Entry<'a> {
        normal: &'a [i8],
        sequence: &'a [usize],
        kind: &'static str,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        dimension: usize,
        count: usize,
        hyperplanes: Vec<Entry<'a>>,
    }
    let entries: Vec<Entry> = a
        .hyperplanes()
        .iter()
        .zip(&sequences)
        .map(|(h, seq)| {
            let seq = seq.as_ref().expect("every hyperplane comes from a sequence");
            let kind = match seq.kind() {
                SequenceKind::SimplePath => "path",
                SequenceKind::EvenSimpleCycle => "cycle",
            };
            Entry { normal: h.normal(), sequence: seq.edges(), kind }
        })
        .collect();
    match cli.format {
        Format::Json => Ok(json(&Out { dimension: a.dimension(), count: a.len(), hyperplanes: entries })),
        Format::Text => Ok(a.hyperplanes().iter().map(|h| format!("{h}\n")).collect()),
        Format::Dot => Err(no_dot("hyperplanes")),
    }
}

fn regions(cli: &Cli, g: &Graph) -> Outcome {
    let a = arrangement(cli, g)?;
    let regions = enumerate_regions(&a)?;
    #[derive(Serialize)]
    struct Out<'a> {
        dimension: usize,
        hyperplanes: usize,
        count: usize,
        regions: &'a [matching_arrangement::Region],
    }
    match cli.format {
        Format::Json => {
            Ok(json(&Out { dimension: a.dimension(), hyperplanes: a.len(), count: regions.len(), regions: &regions }))
        }
        Format::Text => {
            let mut out = String::new();
            for r in &regions {
                let signs: String = r.signs().iter().map(|s| if s.as_i8() > 0 { '+' } else { '-' }).collect();
                let witness: Vec<String> = r.witness().iter().map(ToString::to_string).collect();
                writeln!(out, "{signs} ({})", witness.join(", ")).unwrap();
            }
            Ok(out)
        }
        Format::Dot => Err(no_dot("regions")),
    }
}

/// `t^2 - 2t + 1` from coefficients listed constant term first.
fn polynomial_text(coefficients: &[i64]) -> String {
    let mut out = String::new();
    for (power, &c) in coefficients.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let magnitude = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        if magnitude != 1 || power == 0 {
            write!(out, "{magnitude}").unwrap();
        }
        match power {
            0 => {}
            1 => out.push('t'),
            _ => write!(out, "t^{power}").unwrap(),
        }
    }
    out
}

fn charpoly(cli: &Cli, g: &Graph) -> Outcome {
    let a = arrangement(cli, g)?;
    let chi = characteristic_polynomial(&a)?;
    #[derive(Serialize)]
    struct Count {
        prime: u64,
        count: String,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        coefficients: &'a [i64],
        degree: usize,
        regions: u64,
        evaluations: Vec<Count>,
        control: Count,
    }
    let count = |&(prime, count): &(u64, u128)| Count { prime, count: count.to_string() };
    match cli.format {
        Format::Json => Ok(json(&Out {
            coefficients: chi.coefficients(),
            degree: chi.degree(),
            regions: chi.region_count(),
            evaluations: chi.evaluations().iter().map(count).collect(),
            control: count(&chi.control()),
        })),
        Format::Text => Ok(format!("{}\nregions {}\n", polynomial_text(chi.coefficients()), chi.region_count())),
        Format::Dot => Err(no_dot("charpoly")),
    }
}

#[derive(Serialize)]
struct SkeletonOut<'a> {
    vertices: &'a [matching_arrangement::Matching],
    edges: &'a [(usize, usize)],
}

fn skeleton(cli: &Cli, g: &Graph) -> Outcome {
    let sk = build_skeleton(g);
    match cli.format {
        Format::Json => Ok(json(&SkeletonOut { vertices: &sk.vertices, edges: &sk.edges })),
        Format::Dot => Ok(sk.to_dot()),
        Format::Text => {
            let mut out = String::new();
            for (i, m) in sk.vertices.iter().enumerate() {
                writeln!(out, "v{i} {m}").unwrap();
            }
            for (i, j) in &sk.edges {
                writeln!(out, "v{i} -- v{j}").unwrap();
            }
            Ok(out)
        }
    }
}

fn orientations(cli: &Cli, g: &Graph) -> Outcome {
    let all = enumerate_lp_orientations(g, cli.max_sequences)?;
    let sk: Skeleton = build_skeleton(g);
    #[derive(Serialize)]
    struct Entry {
        fingerprint: String,
        arcs: Vec<(usize, usize)>,
        acyclic: bool,
        source: Option<usize>,
        sink: Option<usize>,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        skeleton: SkeletonOut<'a>,
        count: usize,
        orientations: Vec<Entry>,
    }
    match cli.format {
        Format::Json => {
            let entries = all
                .iter()
                .map(|o| {
                    let props = orientation_properties(o, &sk);
                    Entry {
                        fingerprint: o.fingerprint_hex(),
                        arcs: o.arcs(&sk).collect(),
                        acyclic: props.acyclic,
                        source: props.unique_source(),
                        sink: props.unique_sink(),
                    }
                })
                .collect();
            Ok(json(&Out {
                skeleton: SkeletonOut { vertices: &sk.vertices, edges: &sk.edges },
                count: all.len(),
                orientations: entries,
            }))
        }
        Format::Dot => Ok(all.iter().map(|o| o.to_dot(&sk)).collect()),
        Format::Text => {
            let mut out = String::new();
            for o in &all {
                let arcs: Vec<String> = o.arcs(&sk).map(|(t, h)| format!("v{t}->v{h}")).collect();
                writeln!(out, "{} {}", o.fingerprint_hex(), arcs.join(" ")).unwrap();
            }
            Ok(out)
        }
    }
}

fn verify(cli: &Cli, g: &Graph) -> Outcome {
    let report = verify_bijection(g, cli.samples, cli.seed, cli.max_sequences)?;
    let out = match cli.format {
        Format::Json => json(&report),
        Format::Text => format!(
            "regions {}\norientations {}\ninjective {}\nwell-defined {}\ntotal {}\nverdict {}\n",
            report.region_count,
            report.orientation_count,
            report.injective,
            report.well_defined,
            report.total,
            report.verdict
        ),
        Format::Dot => return Err(no_dot("verify")),
    };
    if report.verdict {
        Ok(out)
    } else {
        Err(Failure::Verdict(out))
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = read_graph(cli)?;
    match cli.command {
        Command::Matchings => matchings(cli, &g),
        Command::Hyperplanes => hyperplanes(cli, &g),
        Command::Regions => regions(cli, &g),
        Command::Charpoly => charpoly(cli, &g),
        Command::Skeleton => skeleton(cli, &g),
        Command::Orientations => orientations(cli, &g),
        Command::Verify => verify(cli, &g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(message)) => {
            eprintln!("matcharr: {}", message.replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Verdict(out)) => {
            print!("{out}");
            eprintln!("matcharr: verification failed");
            ExitCode::from(2)
        }
    }
}
