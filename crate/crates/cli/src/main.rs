//! Batch CLI: every subcommand runs one library operation and prints a
//! single JSON document on stdout. All numeric output is exact (integers or
//! "p/q" strings). Exit codes: 0 success, 1 domain/precondition error, 2
//! malformed input.

use clap::{Args, Parser, Subcommand};
use perilab::brauer::{self, BrauerHomJson, MarkedDiagramJson};
use perilab::grothendieck::{
    completeness_check, discover_theta_table, tensor_by_v, theta_apply, verify_tl_relations,
    GrothVector, ThetaTable, ThetaTableJson,
};
use perilab::linalg::Q;
use perilab::partitions::{
    box_moves, cosocle_witness, diagram_to_weight, dual_weight, is_k_admissible,
    is_quasisymmetric, lr_cache_seed, lr_cache_snapshot, lr_coeff, socle_multiplicity, truncate,
    weight_size, weight_to_diagram, Partition, Rank, Weight, WeightDiagram,
};
use perilab::superalg::{
    adjoint_rep, build_truncated_standard, casimir_matrix, ds_apply, hom_dim, make_ds_x, pn_basis,
    tensor_power_rep, theta_eigen_decomp, trivial_rep, SuperMatrix, SuperRep,
};
use perilab::tl::{
    square_root_pair, staircase, tl_equal, tl_eval_word, tl_is_reduced, TLWord, TlElementJson,
};
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "perilab", version, about = "periplectic desk lab", disable_help_subcommand = true)]
struct Cli {
    /// Cache directory (defaults to $PERILAB_CACHE when set)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight and weight-diagram operations
    Weights(WeightsCmd),
    /// Littlewood-Richardson and socle-multiplicity operations
    Lr(LrCmd),
    /// Temperley-Lieb words and diagrams
    Tl(TlCmd),
    /// Signed diagram category
    Brauer(BrauerCmd),
    /// Exact super linear algebra over p(n)
    Super(SuperCmd),
    /// Reduced Grothendieck module and translation operators
    Groth(GrothCmd),
}

#[derive(Args)]
struct WeightsCmd {
    #[command(subcommand)]
    cmd: WeightsSub,
}

#[derive(Subcommand)]
enum WeightsSub {
    /// |lambda| = -sum of entries
    Size {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "inf")]
        rank: String,
    },
    /// entries <= 0 and |lambda| <= k
    Admissible {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "inf")]
        rank: String,
        #[arg(long)]
        k: i64,
    },
    /// balls at lambda_i + (i-1)
    Diagram {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "inf")]
        rank: String,
    },
    /// recover a weight from its diagram
    FromDiagram {
        #[arg(long)]
        balls: String,
        #[arg(long)]
        tail: Option<i64>,
    },
    /// the dual weight (transpose = reflected diagram)
    Dual {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "inf")]
        rank: String,
    },
    /// first n entries of an infinite weight
    Truncate {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        n: usize,
    },
    /// one-box moves, optionally filtered to k-admissible weights
    Moves {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "inf")]
        rank: String,
        #[arg(long)]
        k: Option<i64>,
    },
}

#[derive(Args)]
struct LrCmd {
    #[command(subcommand)]
    cmd: LrSub,
}

#[derive(Subcommand)]
enum LrSub {
    /// Littlewood-Richardson coefficient N^zeta_{gamma,beta}
    Coeff {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        zeta: String,
    },
    /// socle multiplicity: sum over quasisymmetric gamma of size k
    Socle {
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        k: u32,
    },
    /// the rectangle witness (zeta, k) for beta
    Witness {
        #[arg(long)]
        beta: String,
    },
    /// quasisymmetric test: conj(gamma)_i = gamma_i - 1 on the diagonal
    Qsym {
        #[arg(long)]
        gamma: String,
    },
}

#[derive(Args)]
struct TlCmd {
    #[command(subcommand)]
    cmd: TlSub,
}

#[derive(Subcommand)]
enum TlSub {
    /// normal form of a word
    Eval {
        #[arg(long)]
        word: String,
    },
    /// equality of two words by normal form
    Equal {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// reducedness (zero-valued words reported separately)
    Reduced {
        #[arg(long)]
        word: String,
    },
    /// the staircase word of length s(s+1)
    Staircase {
        #[arg(long)]
        s: usize,
    },
    /// the square-root pair (J, J') of the staircase
    Sqrt {
        #[arg(long)]
        s: usize,
    },
}

#[derive(Args)]
struct BrauerCmd {
    #[command(subcommand)]
    cmd: BrauerSub,
}

#[derive(Subcommand)]
enum BrauerSub {
    /// all (r+s-1)!! signed basis diagrams
    Basis {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// compose g after f (hom JSON inline, @file or - for stdin)
    Compose {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// horizontal juxtaposition f (x) g
    Tensor {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// matrix of a hom on tensor powers of V_n
    Realize {
        #[arg(long)]
        hom: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct SuperCmd {
    #[command(subcommand)]
    cmd: SuperSub,
}

#[derive(Subcommand)]
enum SuperSub {
    /// the 2n^2 labeled basis matrices of p(n)
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// dim sHom(V^{(x)k}, 1)
    Homdim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// graded dimensions of Ker x / Im x
    Ds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        module: String,
    },
    /// the truncated standard module of a weight
    Delta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weight: String,
    },
    /// the tensor Casimir matrix on V (x) M
    Casimir {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        module: String,
    },
    /// integer generalized eigenspace dimensions of the tensor Casimir
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        module: String,
    },
}

#[derive(Args)]
struct GrothCmd {
    #[command(subcommand)]
    cmd: GrothSub,
}

#[derive(Subcommand)]
enum GrothSub {
    /// tensor a basis class by V (box-move sum at the given level)
    Tensorv {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        level: i64,
    },
    /// calibrate the translation table at rank n (cached)
    Calibrate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: i64,
    },
    /// apply theta_j to a basis class
    Theta {
        #[arg(long)]
        j: i64,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        level: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: i64,
    },
    /// check the Temperley-Lieb relations for a calibrated table
    VerifyTl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: i64,
        #[arg(long, default_value = "-5,5", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 3)]
        weight_size: i64,
    },
    /// sum over j of theta_j equals tensoring by V, on one basis class
    Complete {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        level: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: i64,
    },
}

enum CliError {
    /// domain or precondition failure: exit 1
    Domain(String),
    /// malformed input: exit 2
    Malformed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Malformed(_) => 2,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Malformed(m) => m,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let cache = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("PERILAB_CACHE").map(PathBuf::from));
    match run(cli, cache) {
        Ok(v) => {
            println!("{}", v);
        }
        Err(e) => {
            println!("{}", json!({ "error": e.message() }));
            std::process::exit(e.code());
        }
    }
}

/// Inline JSON, @path, or "-" for stdin.
fn payload(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Malformed(format!("stdin: {e}")))?;
        Ok(buf)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("reading {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_entries(arg: &str) -> Result<Vec<i64>, CliError> {
    serde_json::from_str(&payload(arg)?)
        .map_err(|e| CliError::Malformed(format!("weight entries: {e}")))
}

fn parse_weight(entries: &str, rank: &str) -> Result<Weight, CliError> {
    let entries = parse_entries(entries)?;
    let w = match rank {
        "inf" => Weight::infinite(entries),
        r => {
            let n: usize = r
                .parse()
                .map_err(|_| CliError::Malformed(format!("rank must be a number or \"inf\", got {r:?}")))?;
            if entries.len() != n {
                return Err(CliError::Domain(format!(
                    "rank {n} weight must have exactly {n} entries"
                )));
            }
            Weight::finite(entries)
        }
    };
    w.map_err(|e| CliError::Domain(e.to_string()))
}

fn parse_partition(arg: &str) -> Result<Partition, CliError> {
    let rows: Vec<u32> = serde_json::from_str(&payload(arg)?)
        .map_err(|e| CliError::Malformed(format!("partition rows: {e}")))?;
    Partition::new(rows).map_err(|e| CliError::Domain(e.to_string()))
}

fn parse_word(arg: &str) -> Result<TLWord, CliError> {
    let indices: Vec<i64> = serde_json::from_str(&payload(arg)?)
        .map_err(|e| CliError::Malformed(format!("word indices: {e}")))?;
    Ok(TLWord::new(indices))
}

fn parse_hom(arg: &str) -> Result<brauer::BrauerHom, CliError> {
    let j: BrauerHomJson = serde_json::from_str(&payload(arg)?)
        .map_err(|e| CliError::Malformed(format!("hom: {e}")))?;
    j.decode().map_err(CliError::Malformed)
}

fn entries_json(w: &Weight) -> Value {
    json!(w.entries)
}

fn matrix_json(m: &SuperMatrix) -> Value {
    let entries: Vec<Value> = m
        .mat
        .iter()
        .map(|(r, c, v)| json!([r, c, rational_str(v)]))
        .collect();
    json!({
        "rows": m.mat.nrows,
        "cols": m.mat.ncols,
        "parity": m.parity,
        "entries": entries,
    })
}

fn rational_str(q: &Q) -> String {
    let one: Q = Q::from_integer(1.into());
    if q.denom() == one.numer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Desk-scale guard: (2n)^k dimensional spaces beyond a million slots are
/// refused up front instead of exhausting memory.
fn check_tensor_size(n: usize, k: usize) -> Result<(), CliError> {
    let mut dim = 1usize;
    for _ in 0..k {
        dim = dim.saturating_mul(2 * n);
        if dim > 1_000_000 {
            return Err(CliError::Domain(format!(
                "tensor power (2*{n})^{k} is beyond desk scale"
            )));
        }
    }
    Ok(())
}

fn module_rep(n: usize, spec: &str) -> Result<SuperRep, CliError> {
    if spec == "trivial" {
        return Ok(trivial_rep(n));
    }
    if spec == "natural" {
        return Ok(tensor_power_rep(n, 1));
    }
    if spec == "adjoint" {
        return Ok(adjoint_rep(n));
    }
    if let Some(k) = spec.strip_prefix("tensor:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Malformed(format!("bad tensor power {k:?}")))?;
        check_tensor_size(n, k)?;
        return Ok(tensor_power_rep(n, k));
    }
    if let Some(entries) = spec.strip_prefix("delta:") {
        let w = parse_weight(entries, "inf")?;
        return build_truncated_standard(n, &w).map_err(|e| CliError::Domain(e.to_string()));
    }
    Err(CliError::Malformed(format!(
        "unknown module {spec:?} (expected trivial, natural, adjoint, tensor:K or delta:[entries])"
    )))
}

fn load_or_calibrate(
    cache: &Option<PathBuf>,
    n: usize,
    max_size: i64,
) -> Result<(ThetaTable, bool), CliError> {
    let file = cache
        .as_ref()
        .map(|dir| dir.join(format!("theta_n{}_m{}.json", n, max_size)));
    if let Some(path) = &file {
        if let Ok(text) = std::fs::read_to_string(path) {
            let j: ThetaTableJson = serde_json::from_str(&text)
                .map_err(|e| CliError::Malformed(format!("cache {}: {e}", path.display())))?;
            return Ok((ThetaTable::from_json(&j), true));
        }
    }
    let table = discover_theta_table(n, max_size).map_err(|e| CliError::Domain(e.to_string()))?;
    if let Some(path) = &file {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let text = serde_json::to_string(&table.to_json())
            .map_err(|e| CliError::Domain(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::Domain(format!("writing cache: {e}")))?;
    }
    Ok((table, false))
}

fn lr_cache_file(cache: &Option<PathBuf>) -> Option<PathBuf> {
    cache.as_ref().map(|d| d.join("lr.json"))
}

fn lr_cache_load(cache: &Option<PathBuf>) {
    if let Some(path) = lr_cache_file(cache) {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(entries) =
                serde_json::from_str::<Vec<(Vec<u32>, Vec<u32>, Vec<u32>, u64)>>(&text)
            {
                lr_cache_seed(&entries);
            }
        }
    }
}

fn lr_cache_store(cache: &Option<PathBuf>) {
    if let Some(path) = lr_cache_file(cache) {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(text) = serde_json::to_string(&lr_cache_snapshot()) {
            let _ = std::fs::write(path, text);
        }
    }
}

fn run(cli: Cli, cache: Option<PathBuf>) -> Result<Value, CliError> {
    match cli.cmd {
        Cmd::Weights(w) => run_weights(w),
        Cmd::Lr(l) => {
            lr_cache_load(&cache);
            let out = run_lr(l)?;
            lr_cache_store(&cache);
            Ok(out)
        }
        Cmd::Tl(t) => run_tl(t),
        Cmd::Brauer(b) => run_brauer(b),
        Cmd::Super(s) => run_super(s),
        Cmd::Groth(g) => run_groth(g, &cache),
    }
}

fn run_weights(cmd: WeightsCmd) -> Result<Value, CliError> {
    match cmd.cmd {
        WeightsSub::Size { weight, rank } => {
            let w = parse_weight(&weight, &rank)?;
            Ok(json!({ "size": weight_size(&w) }))
        }
        WeightsSub::Admissible { weight, rank, k } => {
            let w = parse_weight(&weight, &rank)?;
            Ok(json!({ "admissible": is_k_admissible(&w, k) }))
        }
        WeightsSub::Diagram { weight, rank } => {
            let w = parse_weight(&weight, &rank)?;
            let d = weight_to_diagram(&w);
            Ok(serde_json::to_value(d).unwrap())
        }
        WeightsSub::FromDiagram { balls, tail } => {
            let balls: Vec<i64> = serde_json::from_str(&payload(&balls)?)
                .map_err(|e| CliError::Malformed(format!("balls: {e}")))?;
            let w = diagram_to_weight(&WeightDiagram { balls, tail })
                .map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({ "rank": rank_json(&w), "entries": w.entries }))
        }
        WeightsSub::Dual { weight, rank } => {
            let w = parse_weight(&weight, &rank)?;
            let d = dual_weight(&w).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({ "dual": d.entries }))
        }
        WeightsSub::Truncate { weight, n } => {
            let w = parse_weight(&weight, "inf")?;
            let t = truncate(&w, n).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({ "weight": t.entries }))
        }
        WeightsSub::Moves { weight, rank, k } => {
            let w = parse_weight(&weight, &rank)?;
            let (minus, plus) = box_moves(&w, k);
            Ok(json!({
                "minus": minus.iter().map(entries_json).collect::<Vec<_>>(),
                "plus": plus.iter().map(entries_json).collect::<Vec<_>>(),
            }))
        }
    }
}

fn rank_json(w: &Weight) -> Value {
    match w.rank {
        Rank::Finite(n) => json!(n),
        Rank::Inf => json!("inf"),
    }
}

fn run_lr(cmd: LrCmd) -> Result<Value, CliError> {
    match cmd.cmd {
        LrSub::Coeff { gamma, beta, zeta } => {
            let g = parse_partition(&gamma)?;
            let b = parse_partition(&beta)?;
            let z = parse_partition(&zeta)?;
            Ok(json!({ "coeff": lr_coeff(&g, &b, &z) }))
        }
        LrSub::Socle { zeta, beta, k } => {
            let z = parse_partition(&zeta)?;
            let b = parse_partition(&beta)?;
            Ok(json!({ "multiplicity": socle_multiplicity(&z, &b, k) }))
        }
        LrSub::Witness { beta } => {
            let b = parse_partition(&beta)?;
            let (zeta, k) = cosocle_witness(&b);
            Ok(json!({ "zeta": zeta.rows, "k": k }))
        }
        LrSub::Qsym { gamma } => {
            let g = parse_partition(&gamma)?;
            Ok(json!({ "qsym": is_quasisymmetric(&g) }))
        }
    }
}

fn run_tl(cmd: TlCmd) -> Result<Value, CliError> {
    match cmd.cmd {
        TlSub::Eval { word } => {
            let w = parse_word(&word)?;
            let e = tl_eval_word(&w);
            Ok(serde_json::to_value(TlElementJson::from(&e)).unwrap())
        }
        TlSub::Equal { left, right } => {
            let l = parse_word(&left)?;
            let r = parse_word(&right)?;
            Ok(json!({ "equal": tl_equal(&l, &r) }))
        }
        TlSub::Reduced { word } => {
            let w = parse_word(&word)?;
            if w.indices.len() > 16 {
                return Err(CliError::Domain(format!(
                    "reducedness search is exponential in word length; {} exceeds the desk-scale bound of 16",
                    w.indices.len()
                )));
            }
            let rep = tl_is_reduced(&w);
            Ok(serde_json::to_value(rep).unwrap())
        }
        TlSub::Staircase { s } => {
            if s == 0 {
                return Err(CliError::Domain("s must be positive".into()));
            }
            Ok(json!({ "word": staircase(s).indices }))
        }
        TlSub::Sqrt { s } => {
            if s == 0 {
                return Err(CliError::Domain("s must be positive".into()));
            }
            let (j, jp) = square_root_pair(s).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({ "j": j.indices, "jprime": jp.indices }))
        }
    }
}

fn run_brauer(cmd: BrauerCmd) -> Result<Value, CliError> {
    match cmd.cmd {
        BrauerSub::Basis { r, s } => {
            let basis = brauer::brauer_basis(r, s);
            let diagrams: Vec<Value> = basis
                .iter()
                .map(|d| serde_json::to_value(MarkedDiagramJson::from(d)).unwrap())
                .collect();
            Ok(json!({ "diagrams": diagrams }))
        }
        BrauerSub::Compose { g, f } => {
            let gh = parse_hom(&g)?;
            let fh = parse_hom(&f)?;
            let out = brauer::brauer_compose(&gh, &fh)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(serde_json::to_value(BrauerHomJson::from(&out)).unwrap())
        }
        BrauerSub::Tensor { f, g } => {
            let fh = parse_hom(&f)?;
            let gh = parse_hom(&g)?;
            let out = brauer::brauer_tensor(&fh, &gh);
            Ok(serde_json::to_value(BrauerHomJson::from(&out)).unwrap())
        }
        BrauerSub::Realize { hom, n } => {
            if n == 0 {
                return Err(CliError::Domain("n must be positive".into()));
            }
            let h = parse_hom(&hom)?;
            check_tensor_size(n, h.r.max(h.s))?;
            let m = brauer::realize(&h, n);
            Ok(matrix_json(&m))
        }
    }
}

fn run_super(cmd: SuperCmd) -> Result<Value, CliError> {
    match cmd.cmd {
        SuperSub::Basis { n } => {
            if n == 0 {
                return Err(CliError::Domain("n must be positive".into()));
            }
            let elements: Vec<Value> = pn_basis(n)
                .iter()
                .map(|(l, m)| {
                    json!({
                        "label": l.name(),
                        "grade": l.grade(),
                        "matrix": matrix_json(m),
                    })
                })
                .collect();
            Ok(json!({ "elements": elements }))
        }
        SuperSub::Homdim { n, k } => {
            if n == 0 {
                return Err(CliError::Domain("n must be positive".into()));
            }
            check_tensor_size(n, k)?;
            Ok(json!({ "dim": hom_dim(n, k) }))
        }
        SuperSub::Ds { n, module } => {
            let rep = module_rep(n, &module)?;
            let x = make_ds_x(n).map_err(|e| CliError::Domain(e.to_string()))?;
            let ds = ds_apply(&x, &rep).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({
                "even": ds.space.even_dim(),
                "odd": ds.space.odd_dim(),
                "sdim": ds.space.sdim(),
            }))
        }
        SuperSub::Delta { n, weight } => {
            let w = parse_weight(&weight, "inf")?;
            check_tensor_size(n, weight_size(&w).max(0) as usize)?;
            let rep =
                build_truncated_standard(n, &w).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({
                "even": rep.space.even_dim(),
                "odd": rep.space.odd_dim(),
                "dim": rep.space.dim(),
            }))
        }
        SuperSub::Casimir { n, module } => {
            let rep = module_rep(n, &module)?;
            let m = casimir_matrix(n, &rep);
            Ok(matrix_json(&m))
        }
        SuperSub::Spectrum { n, module } => {
            let rep = module_rep(n, &module)?;
            let decomp =
                theta_eigen_decomp(n, &rep).map_err(|e| CliError::Domain(e.to_string()))?;
            let spectrum: Vec<Value> = decomp.iter().map(|(j, d)| json!([j, d])).collect();
            Ok(json!({ "spectrum": spectrum }))
        }
    }
}

fn run_groth(cmd: GrothCmd, cache: &Option<PathBuf>) -> Result<Value, CliError> {
    match cmd.cmd {
        GrothSub::Tensorv { weight, level } => {
            let w = parse_weight(&weight, "inf")?;
            let v = GrothVector::basis(w, level);
            let out = tensor_by_v(&v).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(groth_json(&out))
        }
        GrothSub::Calibrate { n, max_size } => {
            let (table, _) = load_or_calibrate(cache, n, max_size)?;
            Ok(serde_json::to_value(table.to_json()).unwrap())
        }
        GrothSub::Theta {
            j,
            weight,
            level,
            n,
            max_size,
        } => {
            let (table, _) = load_or_calibrate(cache, n, max_size)?;
            let w = parse_weight(&weight, "inf")?;
            let v = GrothVector::basis(w, level);
            let out = theta_apply(j, &v, &table).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(groth_json(&out))
        }
        GrothSub::VerifyTl {
            n,
            max_size,
            window,
            weight_size,
        } => {
            let (table, _) = load_or_calibrate(cache, n, max_size)?;
            let parts: Vec<i64> = window
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Malformed(format!("window {window:?}")))?;
            if parts.len() != 2 || parts[0] > parts[1] {
                return Err(CliError::Malformed(format!("window {window:?}")));
            }
            let report = verify_tl_relations(&table, (parts[0], parts[1]), weight_size);
            Ok(serde_json::to_value(report).unwrap())
        }
        GrothSub::Complete {
            weight,
            level,
            n,
            max_size,
        } => {
            let (table, _) = load_or_calibrate(cache, n, max_size)?;
            let w = parse_weight(&weight, "inf")?;
            let v = GrothVector::basis(w, level);
            let ok = completeness_check(&v, &table).map_err(|e| CliError::Domain(e.to_string()))?;
            Ok(json!({ "complete": ok }))
        }
    }
}

fn groth_json(v: &GrothVector) -> Value {
    let terms: Vec<Value> = v
        .terms
        .iter()
        .map(|(w, c)| json!({ "weight": w.entries, "coeff": c }))
        .collect();
    json!({ "level": v.level, "terms": terms })
}
