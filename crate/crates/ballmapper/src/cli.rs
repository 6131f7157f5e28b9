//! The `ballmapper` command line.
//!
//! Exit status: 0 on success, 1 when the pipeline rejects the input (one
//! `error[code]: message` line on stderr), 2 when the arguments do not
//! parse.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use ballmapper_core::analysis::{
    ball_summary, column_ttests, compare_groups, distance_coloring, radius_sweep, subgroup_fraction, ZeroScale,
};
use ballmapper_core::mapper::{build_graph, build_net, color_by, layout, Aggregator, BallMapperGraph, Coloring};
use ballmapper_core::pointcloud::{axis_stats, quartile_split, PointCloud};
use ballmapper_core::regression::{ols_fit, residual_threshold_fractions};
use ballmapper_core::stats::TTestKind;
use ballmapper_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dot::export_dot;
use crate::error::{AppError, AppResult};
use crate::io::{load_cloud_path, LoadSpec};
use crate::json::{self, to_canonical_string};
use crate::report;
use crate::server::{self, ServerConfig};
use crate::svg::render_svg;

/// Environment variable read when `--seed` is not given.
pub const SEED_ENV: &str = "BALLMAPPER_SEED";

#[derive(Parser, Debug)]
#[command(name = "ballmapper", version, about = "Ball Mapper graphs over CSV point clouds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Columns used as point coordinates.
    #[arg(long, value_delimiter = ',', required = true)]
    pub axes: Vec<String>,
    /// Column holding row ids (default: 1-based row numbers).
    #[arg(long = "id-col")]
    pub id_col: Option<String>,
    /// Columns kept as attributes (default: every other column).
    #[arg(long = "attr", value_delimiter = ',')]
    pub attrs: Vec<String>,
    /// Columns that must be present; rows missing one are dropped.
    #[arg(long = "require", value_delimiter = ',')]
    pub require: Vec<String>,
}

impl DataArgs {
    fn load(&self) -> AppResult<PointCloud> {
        let spec = LoadSpec {
            axes: self.axes.clone(),
            id_column: self.id_col.clone(),
            attributes: (!self.attrs.is_empty()).then(|| self.attrs.clone()),
            required: self.require.clone(),
        };
        Ok(load_cloud_path(&self.input, &spec)?.cloud)
    }
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    /// Seed of the landmark draw.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Graph JSON written by `build`.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitRule {
    /// Rows above the threshold against the rest.
    Majority,
    /// Upper quartile against lower quartile.
    Quartile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Welch,
    Pooled,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load a CSV and report per-axis mean, sd, min and max.
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball counts and sizes over a list of radii.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        epsilons: Vec<f64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one graph and write its JSON.
    Build {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[command(flatten)]
        seed: SeedArg,
        /// Embed a mean coloring for each listed column.
        #[arg(long = "color", value_delimiter = ',')]
        colors: Vec<String>,
        /// Also write per-ball means and sds as CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Attribute averaged in the summary.
        #[arg(long = "summary-attr", requires = "summary")]
        summary_attr: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color an existing graph by a column.
    Color {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        graph: GraphArg,
        /// Column to aggregate.
        #[arg(long)]
        by: String,
        /// mean, sd or fraction-true.
        #[arg(long, default_value = "mean")]
        agg: String,
        /// Write the graph JSON with the coloring embedded instead of the
        /// coloring alone.
        #[arg(long)]
        embed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two groups of balls, or test columns between two row splits.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, required_unless_present = "split_by", requires_all = ["group_a", "group_b"])]
        graph: Option<PathBuf>,
        #[arg(long = "group-a", value_delimiter = ',')]
        group_a: Vec<u32>,
        #[arg(long = "group-b", value_delimiter = ',')]
        group_b: Vec<u32>,
        /// Split rows on this numeric column and run two-sample tests.
        #[arg(long = "split-by", conflicts_with = "graph")]
        split_by: Option<String>,
        #[arg(long, value_enum, default_value_t = SplitRule::Majority)]
        rule: SplitRule,
        /// Majority-rule cut: group A holds rows strictly above it.
        #[arg(long, default_value_t = 50.0)]
        threshold: f64,
        /// Columns tested in split mode (default: the axes).
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long, value_enum, default_value_t = TestKind::Welch)]
        test: TestKind,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Color balls by normalised distance to the centroids of target balls.
    Distance {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u32>,
        /// Leave zero-spread axes out instead of failing.
        #[arg(long)]
        exclude_zero_scale: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color balls by the share of rows whose column equals a value.
    Fraction {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        column: String,
        #[arg(long)]
        equals: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least squares of one column on others.
    Ols {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        outcome: String,
        #[arg(long, value_delimiter = ',', required = true)]
        regressors: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Embed residual threshold-fraction colorings into a graph.
    ResidualMap {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        outcome: String,
        #[arg(long, value_delimiter = ',', required = true)]
        regressors: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.0, 6.0])]
        thresholds: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a graph as DOT or SVG.
    Export {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        graph: GraphArg,
        /// Coloring JSON written by `color`, `distance` or `fraction`.
        #[arg(long, conflicts_with = "label")]
        coloring: Option<PathBuf>,
        /// Name of a coloring embedded in the graph JSON.
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        /// Layout seed for SVG (default: the graph's seed).
        #[arg(long)]
        layout_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Minutes of inactivity before a session is dropped.
        #[arg(long, default_value_t = 30)]
        idle_minutes: u64,
        #[arg(long, default_value_t = 100_000)]
        max_rows: usize,
        /// Allowed CORS origin (default: any).
        #[arg(long)]
        origin: Option<String>,
    },
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("usage error");
            let _ = writeln!(stderr, "{line}");
            return 2;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error[{}]: {msg}", e.code());
            1
        }
    }
}

fn emit(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> AppResult<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(AppError::file(path)),
        None => stdout.write_all(content.as_bytes()).map_err(AppError::file("<stdout>")),
    }
}

fn read_graph(path: &Path, cloud: &PointCloud) -> AppResult<(BallMapperGraph, Vec<Coloring>)> {
    let text = std::fs::read_to_string(path).map_err(AppError::file(path))?;
    json::parse_graph(&text, cloud)
}

fn execute(command: Command, stdout: &mut dyn Write) -> AppResult<()> {
    match command {
        Command::Ingest { data, out } => {
            let cloud = data.load()?;
            emit(out.as_deref(), &report::axis_stats_csv(&axis_stats(&cloud))?, stdout)
        }
        Command::Sweep { data, epsilons, seed, out } => {
            let cloud = data.load()?;
            emit(out.as_deref(), &report::sweep_csv(&radius_sweep(&cloud, &epsilons, seed.seed)?)?, stdout)
        }
        Command::Build { data, epsilon, seed, colors, summary, summary_attr, out } => {
            let cloud = data.load()?;
            let graph = build_graph(&cloud, &build_net(&cloud, epsilon, seed.seed)?)?;
            let colorings = colors
                .iter()
                .map(|c| Ok(color_by(&graph, &cloud.column(c)?, Aggregator::Mean, c)?))
                .collect::<AppResult<Vec<_>>>()?;
            if let Some(path) = summary {
                let rows = ball_summary(&graph, &cloud, summary_attr.as_deref())?;
                let csv = report::summary_csv(cloud.axis_names(), summary_attr.as_deref(), &rows)?;
                emit(Some(&path), &csv, stdout)?;
            }
            emit(out.as_deref(), &json::graph_to_string(&graph, &cloud, &colorings)?, stdout)
        }
        Command::Color { data, graph, by, agg, embed, out } => {
            let cloud = data.load()?;
            let (graph, mut colorings) = read_graph(&graph.graph, &cloud)?;
            let agg: Aggregator = agg.parse()?;
            let coloring = color_by(&graph, &cloud.column(&by)?, agg, &by)?;
            if embed {
                colorings.retain(|c| c.label != coloring.label);
                colorings.push(coloring);
                colorings.sort_by(|a, b| a.label.cmp(&b.label));
                emit(out.as_deref(), &json::graph_to_string(&graph, &cloud, &colorings)?, stdout)
            } else {
                emit(out.as_deref(), &to_canonical_string(&json::coloring_to_value(&coloring)), stdout)
            }
        }
        Command::Compare { data, graph, group_a, group_b, split_by, rule, threshold, columns, test, out, json } => {
            let cloud = data.load()?;
            let (csv, value) = match (graph, split_by) {
                (Some(path), _) => {
                    let (graph, _) = read_graph(&path, &cloud)?;
                    let report = compare_groups(&graph, &cloud, &group_a, &group_b, &axis_stats(&cloud))?;
                    (report::comparison_csv(&report)?, json::comparison_to_value(&report))
                }
                (None, Some(column)) => {
                    let (rows_a, rows_b) = split_rows(&cloud, &column, rule, threshold)?;
                    let names: Vec<&str> = if columns.is_empty() {
                        cloud.axis_names().iter().map(String::as_str).collect()
                    } else {
                        columns.iter().map(String::as_str).collect()
                    };
                    let kind = match test {
                        TestKind::Welch => TTestKind::Welch,
                        TestKind::Pooled => TTestKind::Pooled,
                    };
                    let tests = column_ttests(&cloud, &names, &rows_a, &rows_b, kind)?;
                    (report::ttests_csv(&tests)?, json::ttests_to_value(&tests))
                }
                (None, None) => unreachable!("clap requires --graph or --split-by"),
            };
            if let Some(path) = json {
                emit(Some(&path), &to_canonical_string(&value), stdout)?;
            }
            emit(out.as_deref(), &csv, stdout)
        }
        Command::Distance { data, graph, targets, exclude_zero_scale, out } => {
            let cloud = data.load()?;
            let (graph, _) = read_graph(&graph.graph, &cloud)?;
            let zero = if exclude_zero_scale { ZeroScale::ExcludeAxis } else { ZeroScale::Error };
            let coloring = distance_coloring(&graph, &cloud, &targets, &axis_stats(&cloud), zero)?;
            emit(out.as_deref(), &to_canonical_string(&json::coloring_to_value(&coloring)), stdout)
        }
        Command::Fraction { data, graph, column, equals, out } => {
            let cloud = data.load()?;
            let (graph, _) = read_graph(&graph.graph, &cloud)?;
            let flags = cloud.flags_equal(&column, &equals)?;
            let coloring = subgroup_fraction(&graph, &flags, &format!("{column} = {equals}"))?;
            emit(out.as_deref(), &to_canonical_string(&json::coloring_to_value(&coloring)), stdout)
        }
        Command::Ols { data, outcome, regressors, out, json } => {
            let cloud = data.load()?;
            let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
            let fit = ols_fit(&cloud, &outcome, &names)?;
            if let Some(path) = json {
                emit(Some(&path), &to_canonical_string(&json::ols_to_value(&fit)), stdout)?;
            }
            emit(out.as_deref(), &report::ols_csv(&fit)?, stdout)
        }
        Command::ResidualMap { data, graph, outcome, regressors, thresholds, out } => {
            let cloud = data.load()?;
            let (graph, mut colorings) = read_graph(&graph.graph, &cloud)?;
            let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
            let fit = ols_fit(&cloud, &outcome, &names)?;
            for c in residual_threshold_fractions(&graph, &fit, &thresholds)? {
                colorings.retain(|old| old.label != c.label);
                colorings.push(c);
            }
            colorings.sort_by(|a, b| a.label.cmp(&b.label));
            emit(out.as_deref(), &json::graph_to_string(&graph, &cloud, &colorings)?, stdout)
        }
        Command::Export { data, graph, coloring, label, format, layout_seed, out } => {
            let cloud = data.load()?;
            let (graph, embedded) = read_graph(&graph.graph, &cloud)?;
            let chosen = match (coloring, label) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).map_err(AppError::file(&path))?;
                    Some(json::coloring_from_value(&serde_json::from_str(&text)?, graph.ball_count())?)
                }
                (None, Some(label)) => {
                    Some(embedded.into_iter().find(|c| c.label == label).ok_or(Error::UnknownColumn(label))?)
                }
                (None, None) => None,
            };
            let text = match format {
                ExportFormat::Dot => export_dot(&graph, chosen.as_ref())?,
                ExportFormat::Svg => {
                    let positions = layout(&graph, layout_seed.unwrap_or(graph.seed()));
                    render_svg(&graph, &positions, chosen.as_ref())?
                }
            };
            emit(out.as_deref(), &text, stdout)
        }
        Command::Serve { addr, idle_minutes, max_rows, origin } => {
            let config = ServerConfig {
                idle_timeout: std::time::Duration::from_secs(idle_minutes * 60),
                max_rows,
                allowed_origin: origin,
                ..ServerConfig::default()
            };
            let runtime = tokio::runtime::Runtime::new().map_err(AppError::file("<runtime>"))?;
            runtime.block_on(server::serve(&addr, config))
        }
    }
}

/// Row groups for split-mode comparisons: `(A, B)`.
pub fn split_rows(
    cloud: &PointCloud,
    column: &str,
    rule: SplitRule,
    threshold: f64,
) -> AppResult<(Vec<usize>, Vec<usize>)> {
    match rule {
        SplitRule::Majority => {
            let values = cloud.complete_column(column)?;
            Ok((0..values.len()).partition(|&r| values[r] > threshold))
        }
        SplitRule::Quartile => {
            let (lower, upper) = quartile_split(cloud, column)?;
            Ok((upper, lower))
        }
    }
}
