use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use mdgsp::filtering::KernelSpec;
use mdgsp::io::{
    read_matrix_bin, read_signal_csv, read_spectrum_csv, write_eigen_csv, write_matrix_bin, write_signal_csv,
    write_spectrum_csv,
};
use mdgsp::perf::{bench_transforms, BenchOptions};
use mdgsp::stationarity::{
    construct_directional_from_gamma, construct_h_from_gamma, default_tol, sample_directional, sample_fgw,
    sample_multivariate, test_directional_stationarity, test_fgw_stationarity, DirectionalProcess,
    DirectionalStationarityReport, FgwProcess, FgwStationarityReport, WhiteNoise2D,
};
use mdgsp::transform::{adjacency_gft_2d, inverse_adjacency_gft_2d};
use mdgsp::{
    aggregate_to_1d, cartesian_product, ebem_minimize, gft_2d, inverse_gft_2d, polynomial_filter_vertex,
    spectral_filter_2d, total_directional_variation, Direction, EbemParams, Error as CoreError, Factor, Graph,
    Signal2D, SolveReport, SolverOptions, SpectralKernel2D, Spectrum2D,
};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::*;
use crate::error::{AtPath, CliError};
use crate::manifest::RunManifest;
use crate::render::heatmap_svg;

type CmdResult = Result<(), CliError>;

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).at(path)
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::from_json(&read_text(path)?).at(path)
}

fn read_signal(path: &Path) -> Result<Signal2D, CliError> {
    read_signal_csv(BufReader::new(File::open(path).at(path)?)).at(path)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path).at(path)?))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> mdgsp::Result<()>) -> CmdResult {
    let mut w = create(path)?;
    f(&mut w).at(path)?;
    w.flush().at(path)
}

fn write_json(path: &Path, value: &impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).at(path)?;
    std::fs::write(path, text + "\n").at(path)
}

fn factor(graph: &Graph, operator: Operator) -> mdgsp::Result<Factor> {
    match operator {
        Operator::Laplacian => Factor::laplacian(graph),
        Operator::Adjacency => Factor::adjacency(graph),
    }
}

fn factors(pair: &Pair, operator: Operator, m: &mut RunManifest) -> Result<(Factor, Factor), CliError> {
    m.input("g1", &pair.g1);
    m.input("g2", &pair.g2);
    let (g1, g2) = (read_graph(&pair.g1)?, read_graph(&pair.g2)?);
    let f = m.timed("eigendecomposition", || -> mdgsp::Result<_> {
        Ok((factor(&g1, operator)?, factor(&g2, operator)?))
    })?;
    Ok(f)
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(CoreError::Format(format!("{what} must be a nonempty rectangular matrix")).into());
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn read_matrix_json(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(&read_text(path)?).at(path)?;
    matrix_from_rows(&rows, &path.display().to_string())
}

fn read_matrices_json(path: &Path) -> Result<Vec<DMatrix<f64>>, CliError> {
    let list: Vec<Vec<Vec<f64>>> = serde_json::from_str(&read_text(path)?).at(path)?;
    if list.is_empty() {
        return Err(CliError::File {
            path: path.to_path_buf(),
            source: CoreError::Format("expected a nonempty list of matrices".into()),
        });
    }
    list.iter()
        .map(|rows| matrix_from_rows(rows, &path.display().to_string()))
        .collect()
}

pub fn product(a: &ProductArgs, m: &mut RunManifest) -> CmdResult {
    m.input("g1", &a.graphs.g1);
    m.input("g2", &a.graphs.g2);
    let (g1, g2) = (read_graph(&a.graphs.g1)?, read_graph(&a.graphs.g2)?);
    let pg = cartesian_product(&g1, &g2);
    write_json(&a.out, &pg.graph.to_file())?;
    m.output(&a.out);
    Ok(())
}

pub fn eig(a: &EigArgs, m: &mut RunManifest) -> CmdResult {
    m.input("g1", &a.g1);
    m.param("operator", format!("{:?}", a.operator).to_lowercase());
    let g = read_graph(&a.g1)?;
    let f = m.timed("eigendecomposition", || factor(&g, a.operator))?;
    match a.format {
        Format::Csv => write_with(&a.out, |w| write_eigen_csv(w, &f.basis))?,
        Format::Json => {
            let v = &f.basis.vectors;
            let rows: Vec<Vec<f64>> = (0..v.nrows()).map(|i| v.row(i).iter().copied().collect()).collect();
            write_json(
                &a.out,
                &json!({"source": f.basis.source, "values": f.basis.values(), "vectors": rows}),
            )?;
        }
    }
    m.output(&a.out);
    Ok(())
}

fn rows_of(mat: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..mat.nrows()).map(|i| mat.row(i).iter().copied().collect()).collect()
}

/// Spectrum annotations must be the eigenvalues of the given graphs.
fn check_annotations(s: &Spectrum2D, f1: &Factor, f2: &Factor) -> mdgsp::Result<()> {
    let close = |a: &[f64], b: &[f64]| {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-8 * x.abs().max(1.0))
    };
    if close(&s.lambda1, f1.basis.values()) && close(&s.lambda2, f2.basis.values()) {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch {
            expected: "spectrum annotated with the eigenvalues of --g1 and --g2".into(),
            actual: "different eigenvalues".into(),
        })
    }
}

pub fn gft(a: &GftArgs, m: &mut RunManifest) -> CmdResult {
    let (f1, f2) = factors(&a.graphs, a.operator, m)?;
    m.param("operator", format!("{:?}", a.operator).to_lowercase());
    if let Some(path) = &a.spectrum {
        m.input("spectrum", path);
        let s = read_spectrum_csv(BufReader::new(File::open(path).at(path)?)).at(path)?;
        check_annotations(&s, &f1, &f2).at(path)?;
        let x = m.timed("transform", || match a.operator {
            Operator::Laplacian => inverse_gft_2d(&s, &f1.basis, &f2.basis),
            Operator::Adjacency => inverse_adjacency_gft_2d(&s, &f1.basis, &f2.basis),
        })?;
        write_with(&a.out, |w| write_signal_csv(w, &x))?;
        m.output(&a.out);
        return Ok(());
    }
    let path = a.signal.as_ref().expect("clap requires --signal without --spectrum");
    m.input("signal", path);
    m.param("tol", a.tol);
    let x = read_signal(path)?;
    let s = m.timed("transform", || match a.operator {
        Operator::Laplacian => gft_2d(&x, &f1.basis, &f2.basis),
        Operator::Adjacency => adjacency_gft_2d(&x, &f1.basis, &f2.basis),
    })?;
    match a.format {
        Format::Csv => write_with(&a.out, |w| write_spectrum_csv(w, &s))?,
        Format::Json => {
            let groups = aggregate_to_1d(&s, a.tol)?;
            write_json(
                &a.out,
                &json!({
                    "lambda1": s.lambda1,
                    "lambda2": s.lambda2,
                    "re": rows_of(&s.real()),
                    "im": rows_of(&s.imag()),
                    "power": rows_of(&s.power()),
                    "groups": groups.groups,
                }),
            )?;
        }
    }
    m.output(&a.out);
    if let Some(svg) = &a.svg {
        std::fs::write(svg, heatmap_svg(&s)).at(svg)?;
        m.output(svg);
    }
    Ok(())
}

pub fn filter(a: &FilterArgs, m: &mut RunManifest) -> CmdResult {
    m.input("signal", &a.signal);
    m.input("kernel", &a.kernel);
    m.param("domain", format!("{:?}", a.domain).to_lowercase());
    let spec: KernelSpec = serde_json::from_str(&read_text(&a.kernel)?).at(&a.kernel)?;
    let kernel = spec.build().at(&a.kernel)?;
    let x = read_signal(&a.signal)?;
    let y = match a.domain {
        FilterDomain::Spectral => {
            let (f1, f2) = factors(&a.graphs, Operator::Laplacian, m)?;
            m.timed("filter", || spectral_filter_2d(&x, &kernel, &f1.basis, &f2.basis))?
        }
        FilterDomain::Vertex => {
            let SpectralKernel2D::Polynomial(poly) = &kernel else {
                return Err(CliError::File {
                    path: a.kernel.clone(),
                    source: CoreError::InvalidParameter(format!(
                        "vertex-domain filtering needs a polynomial kernel, got {}",
                        kernel.kind()
                    )),
                });
            };
            m.input("g1", &a.graphs.g1);
            m.input("g2", &a.graphs.g2);
            let (g1, g2) = (read_graph(&a.graphs.g1)?, read_graph(&a.graphs.g2)?);
            m.timed("filter", || {
                polynomial_filter_vertex(&x, poly, &g1.laplacian(), &g2.laplacian())
            })?
        }
    };
    write_with(&a.out, |w| write_signal_csv(w, &y))?;
    m.output(&a.out);
    Ok(())
}

#[derive(Serialize)]
struct Variations {
    s1: f64,
    s2: f64,
}

fn variations(x: &Signal2D, f1: &Factor, f2: &Factor) -> mdgsp::Result<Variations> {
    Ok(Variations {
        s1: total_directional_variation(x, Direction::First, f1)?.total,
        s2: total_directional_variation(x, Direction::Second, f2)?.total,
    })
}

#[derive(Serialize)]
struct DenoiseRun {
    gamma1: f64,
    gamma2: f64,
    output: PathBuf,
    #[serde(flatten)]
    solve: SolveReport,
    variation_after: Variations,
}

/// `out` itself for a single run, `<stem>.<index>.<ext>` inside a sweep.
fn sweep_path(out: &Path, index: usize, total: usize) -> PathBuf {
    if total == 1 {
        return out.to_path_buf();
    }
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    out.with_file_name(name)
}

pub fn denoise(a: &DenoiseArgs, m: &mut RunManifest) -> CmdResult {
    m.input("observation", &a.observation);
    for (k, v) in [("p", a.p), ("q1", a.q1), ("q2", a.q2), ("tol", a.tol)] {
        m.param(k, v);
    }
    m.param("gamma1", &a.gamma1);
    m.param("gamma2", &a.gamma2);
    m.param("max_iter", a.max_iter);
    m.param("iterative", a.iterative);
    let (f1, f2) = factors(&a.graphs, Operator::Laplacian, m)?;
    let y = read_signal(&a.observation)?;
    let options = SolverOptions {
        max_iter: a.max_iter,
        tol: a.tol,
        force_iterative: a.iterative,
    };
    let grid: Vec<(f64, f64)> = a
        .gamma1
        .iter()
        .flat_map(|&g1| a.gamma2.iter().map(move |&g2| (g1, g2)))
        .collect();
    let solves = m.timed("solve", || {
        grid.par_iter()
            .map(|&(gamma1, gamma2)| {
                let params = EbemParams {
                    p: a.p,
                    gamma1,
                    gamma2,
                    q1: a.q1,
                    q2: a.q2,
                };
                ebem_minimize(&y, &params, &f1, &f2, &options)
            })
            .collect::<mdgsp::Result<Vec<_>>>()
    })?;
    let before = variations(&y, &f1, &f2)?;
    let mut runs = Vec::with_capacity(solves.len());
    for (i, (solve, &(gamma1, gamma2))) in solves.into_iter().zip(&grid).enumerate() {
        let output = sweep_path(&a.out, i, grid.len());
        write_with(&output, |w| write_signal_csv(w, &solve.minimizer))?;
        m.output(&output);
        runs.push(DenoiseRun {
            gamma1,
            gamma2,
            output,
            variation_after: variations(&solve.minimizer, &f1, &f2)?,
            solve,
        });
    }
    if let Some(report) = &a.report {
        write_json(
            report,
            &json!({"p": a.p, "q1": a.q1, "q2": a.q2, "variation_before": before, "runs": runs}),
        )?;
        m.output(report);
    }
    Ok(())
}

pub fn variation(a: &VariationArgs, m: &mut RunManifest) -> CmdResult {
    m.input("signal", &a.signal);
    m.param("direction", a.direction);
    let direction = Direction::try_from(a.direction)?;
    let (f1, f2) = factors(&a.graphs, Operator::Laplacian, m)?;
    let x = read_signal(&a.signal)?;
    let factor = if direction == Direction::First { &f1 } else { &f2 };
    let (n1, n2) = x.shape();
    if (f1.n(), f2.n()) != (n1, n2) {
        return Err(CoreError::DimensionMismatch {
            expected: format!("{}x{} signal", f1.n(), f2.n()),
            actual: format!("{n1}x{n2}"),
        })
        .at(&a.signal);
    }
    let r = m.timed("variation", || total_directional_variation(&x, direction, factor))?;
    write_json(&a.out, &r)?;
    m.output(&a.out);
    if let Some(local) = &a.local {
        let l = Signal2D::new(r.local.clone())?;
        write_with(local, |w| write_signal_csv(w, &l))?;
        m.output(local);
    }
    Ok(())
}

enum Process {
    Fgw(FgwProcess),
    Directional(DirectionalProcess),
    Multivariate(Vec<DMatrix<f64>>),
}

#[derive(Serialize)]
#[serde(untagged)]
enum TestReport {
    Fgw(FgwStationarityReport),
    Directional(DirectionalStationarityReport),
}

struct Setup {
    f1: Factor,
    f2: Option<Factor>,
    n1: usize,
    n2: usize,
}

fn setup(a: &StationarityArgs, m: &mut RunManifest) -> Result<Setup, CliError> {
    m.input("g1", &a.g1);
    let f1 = m.timed("eigendecomposition", || {
        read_graph(&a.g1).and_then(|g| Ok(Factor::laplacian(&g)?))
    })?;
    let f2 = match (&a.g2, a.kind) {
        (_, ProcessKind::Mv) => None,
        (Some(path), _) => {
            m.input("g2", path);
            Some(Factor::laplacian(&read_graph(path)?)?)
        }
        (None, _) => {
            return Err(CliError::usage(
                format!("--g2 is required for --kind {:?}", a.kind).to_lowercase(),
            ))
        }
    };
    let n2 = match &f2 {
        Some(f) => f.n(),
        None => match (a.variates, &a.coeffs, &a.gamma) {
            (Some(p), ..) => p,
            (None, Some(path), _) | (None, None, Some(path)) => read_matrices_json(path)?[0].nrows(),
            (None, None, None) => return Err(CliError::usage("--kind mv needs --variates, --coeffs or --gamma")),
        },
    };
    Ok(Setup { n1: f1.n(), f1, f2, n2 })
}

fn build_process(a: &StationarityArgs, s: &Setup, m: &mut RunManifest) -> Result<Process, CliError> {
    let second = || s.f2.as_ref().expect("set up for two-factor kinds");
    if let Some(path) = &a.coeffs {
        m.input("coeffs", path);
        return Ok(match a.kind {
            ProcessKind::Fgw => {
                let h = mdgsp::PolyKernel2D::new(read_matrix_json(path)?).at(path)?;
                Process::Fgw(FgwProcess::new(h, s.n1, s.n2).at(path)?)
            }
            ProcessKind::Dir1 => Process::Directional(
                DirectionalProcess::new(Direction::First, read_matrices_json(path)?, s.n1, s.n2).at(path)?,
            ),
            ProcessKind::Dir2 => Process::Directional(
                DirectionalProcess::new(Direction::Second, read_matrices_json(path)?, s.n1, s.n2).at(path)?,
            ),
            ProcessKind::Mv => {
                let hs = read_matrices_json(path)?;
                DirectionalProcess::new(Direction::First, hs.clone(), s.n1, s.n2).at(path)?;
                Process::Multivariate(hs)
            }
        });
    }
    let Some(path) = &a.gamma else {
        return Err(CliError::usage("synthesize mode needs --coeffs or --gamma"));
    };
    m.input("gamma", path);
    Ok(match a.kind {
        ProcessKind::Fgw => {
            Process::Fgw(construct_h_from_gamma(&read_matrix_json(path)?, &s.f1.basis, &second().basis).at(path)?)
        }
        ProcessKind::Dir1 => Process::Directional(
            construct_directional_from_gamma(Direction::First, &read_matrices_json(path)?, &s.f1.basis).at(path)?,
        ),
        ProcessKind::Dir2 => Process::Directional(
            construct_directional_from_gamma(Direction::Second, &read_matrices_json(path)?, &second().basis)
                .at(path)?,
        ),
        ProcessKind::Mv => {
            let p =
                construct_directional_from_gamma(Direction::First, &read_matrices_json(path)?, &s.f1.basis).at(path)?;
            Process::Multivariate(p.coeffs().to_vec())
        }
    })
}

fn run_tests(a: &StationarityArgs, s: &Setup, samples: &[Signal2D], tol: f64) -> mdgsp::Result<TestReport> {
    Ok(match a.kind {
        ProcessKind::Fgw => {
            let f2 = s.f2.as_ref().expect("set up for two-factor kinds");
            TestReport::Fgw(test_fgw_stationarity(samples, &s.f1.basis, &f2.basis, tol)?)
        }
        ProcessKind::Dir1 | ProcessKind::Mv => TestReport::Directional(test_directional_stationarity(
            samples,
            Direction::First,
            &s.f1.basis,
            tol,
        )?),
        ProcessKind::Dir2 => {
            let f2 = s.f2.as_ref().expect("set up for two-factor kinds");
            TestReport::Directional(test_directional_stationarity(
                samples,
                Direction::Second,
                &f2.basis,
                tol,
            )?)
        }
    })
}

fn samples_to_matrix(samples: &[Signal2D], n1: usize, n2: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(samples.len(), n1 * n2);
    for (r, x) in samples.iter().enumerate() {
        for i in 0..n1 {
            for j in 0..n2 {
                out[(r, n2 * i + j)] = x[(i, j)];
            }
        }
    }
    out
}

fn matrix_to_samples(mat: &DMatrix<f64>, n1: usize, n2: usize) -> mdgsp::Result<Vec<Signal2D>> {
    if mat.ncols() != n1 * n2 {
        return Err(CoreError::DimensionMismatch {
            expected: format!("{} values per sample ({n1}x{n2})", n1 * n2),
            actual: mat.ncols().to_string(),
        });
    }
    (0..mat.nrows())
        .map(|r| Signal2D::from_flat(&mat.row(r).iter().copied().collect::<Vec<_>>(), n1, n2))
        .collect()
}

pub fn stationarity(a: &StationarityArgs, m: &mut RunManifest) -> CmdResult {
    m.param("mode", format!("{:?}", a.mode).to_lowercase());
    m.param("kind", format!("{:?}", a.kind).to_lowercase());
    let s = setup(a, m)?;
    let (samples, process_info) = match a.mode {
        Mode::Synthesize => {
            let out = a
                .out
                .as_ref()
                .ok_or_else(|| CliError::usage("synthesize mode needs --out"))?;
            m.seed = Some(a.seed);
            m.param("samples", a.samples);
            m.param("noise", format!("{:?}", a.noise).to_lowercase());
            let process = build_process(a, &s, m)?;
            let noise = WhiteNoise2D::new(s.n1, s.n2, a.seed).with_kind(a.noise.into());
            let (samples, coeffs) = m.timed("sample", || -> mdgsp::Result<_> {
                Ok(match &process {
                    Process::Fgw(p) => {
                        let f2 = s.f2.as_ref().expect("set up for two-factor kinds");
                        (
                            sample_fgw(p, &s.f1, f2, &noise, a.samples)?,
                            json!(rows_of(p.kernel().coeffs())),
                        )
                    }
                    Process::Directional(p) => {
                        let f = match p.direction() {
                            Direction::First => &s.f1,
                            Direction::Second => s.f2.as_ref().expect("set up for two-factor kinds"),
                        };
                        let c: Vec<_> = p.coeffs().iter().map(rows_of).collect();
                        (sample_directional(p, f, &noise, a.samples)?, json!(c))
                    }
                    Process::Multivariate(hs) => {
                        let xs = sample_multivariate(hs, &s.f1, &noise, a.samples)?
                            .into_iter()
                            .map(|x| x.as_product_signal())
                            .collect();
                        (xs, json!(hs.iter().map(rows_of).collect::<Vec<_>>()))
                    }
                })
            })?;
            write_with(out, |w| write_matrix_bin(w, &samples_to_matrix(&samples, s.n1, s.n2)))?;
            m.output(out);
            (
                samples,
                json!({"coefficients": coeffs, "seed": a.seed, "noise": a.noise.to_possible_value_name()}),
            )
        }
        Mode::Test => {
            let path = a
                .signal
                .as_ref()
                .ok_or_else(|| CliError::usage("test mode needs --signal"))?;
            m.input("signal", path);
            let mat = read_matrix_bin(BufReader::new(File::open(path).at(path)?)).at(path)?;
            (matrix_to_samples(&mat, s.n1, s.n2).at(path)?, Value::Null)
        }
    };
    let tol = a.tol.unwrap_or_else(|| default_tol(samples.len()));
    m.param("tol", tol);
    let tests = m.timed("test", || run_tests(a, &s, &samples, tol))?;
    write_json(
        &a.report,
        &json!({
            "mode": format!("{:?}", a.mode).to_lowercase(),
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "shape": [s.n1, s.n2],
            "samples": samples.len(),
            "process": process_info,
            "tests": tests,
        }),
    )?;
    m.output(&a.report);
    Ok(())
}

trait ValueName {
    fn to_possible_value_name(self) -> String;
}

impl<T: clap::ValueEnum> ValueName for T {
    fn to_possible_value_name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::usage(format!("size `{s}` is not of the form N1xN2"));
    let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let n1: usize = a.parse().map_err(|_| bad())?;
    let n2: usize = b.parse().map_err(|_| bad())?;
    if n1 == 0 || n2 == 0 {
        return Err(bad());
    }
    Ok((n1, n2))
}

pub fn bench(a: &BenchArgs, m: &mut RunManifest) -> CmdResult {
    let sizes = a.sizes.iter().map(|s| parse_size(s)).collect::<Result<Vec<_>, _>>()?;
    m.seed = Some(a.seed);
    m.param("sizes", &sizes);
    m.param("repetitions", a.repetitions);
    m.param("naive_max_vertices", a.naive_max_vertices);
    let options = BenchOptions {
        repetitions: a.repetitions,
        naive_max_vertices: (a.naive_max_vertices > 0).then_some(a.naive_max_vertices),
        seed: a.seed,
        ..Default::default()
    };
    let report = m.timed("bench", || bench_transforms(&sizes, &options))?;
    write_json(&a.out, &report)?;
    m.output(&a.out);
    Ok(())
}

pub fn render(a: &RenderArgs, m: &mut RunManifest) -> CmdResult {
    m.input("spectrum", &a.spectrum);
    let s = read_spectrum_csv(BufReader::new(File::open(&a.spectrum).at(&a.spectrum)?)).at(&a.spectrum)?;
    std::fs::write(&a.svg, heatmap_svg(&s)).at(&a.svg)?;
    m.output(&a.svg);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_size("64x32").unwrap(), (64, 32));
        assert_eq!(parse_size(" 8X8").unwrap(), (8, 8));
        for bad in ["64", "0x3", "ax3", "3x"] {
            assert!(parse_size(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_paths() {
        let out = Path::new("/tmp/x/min.csv");
        assert_eq!(sweep_path(out, 0, 1), out);
        assert_eq!(sweep_path(out, 3, 4), Path::new("/tmp/x/min.3.csv"));
        assert_eq!(sweep_path(Path::new("min"), 1, 2), Path::new("min.1"));
    }

    #[test]
    fn samples_flatten_row_major() {
        let xs = vec![Signal2D::from_fn(2, 3, |i, j| (3 * i + j) as f64); 2];
        let mat = samples_to_matrix(&xs, 2, 3);
        assert_eq!(
            mat.row(1).iter().copied().collect::<Vec<_>>(),
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
        );
        assert_eq!(matrix_to_samples(&mat, 2, 3).unwrap(), xs);
        assert!(matrix_to_samples(&mat, 3, 3).is_err());
    }

    #[test]
    fn ragged_matrices_are_rejected() {
        assert!(matrix_from_rows(&[vec![1.0], vec![1.0, 2.0]], "h").is_err());
        assert!(matrix_from_rows(&[], "h").is_err());
        assert_eq!(matrix_from_rows(&[vec![1.0, 2.0]], "h").unwrap().shape(), (1, 2));
    }
}
