use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use okmult::regularity::Pair;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "okmult", version, about = "Multiplicative functions over imaginary quadratic rings of integers")]
#[command(after_help = "Every report is printed as JSON (default) or CSV; the CSV columns of each \
subcommand are listed in its --help. Exit codes: 0 success, 2 failed precondition, 64 usage error, \
66 unreadable input file.")]
pub struct Cli {
    /// Squarefree d > 0 selecting the field Q(sqrt(-d))
    #[arg(long, global = true, default_value_t = 1)]
    pub d: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Recorded in the report; every engine is deterministic
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainArg {
    Elements,
    Ideals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseArg {
    Displayed,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdditiveArg {
    Omega,
    BigOmega,
    Zero,
}

/// `x,y` for the element `x + y*tau`.
pub fn parse_element(s: &str) -> Result<[i64; 2], String> {
    let v = parse_ints(s)?;
    <[i64; 2]>::try_from(v).map_err(|_| format!("expected x,y, got {s:?}"))
}

pub fn parse_form(s: &str) -> Result<[i64; 6], String> {
    let v = parse_ints(s)?;
    <[i64; 6]>::try_from(v).map_err(|_| format!("expected a,b,c,e,f,g, got {s:?}"))
}

pub fn parse_hnf(s: &str) -> Result<[i64; 3], String> {
    let v = parse_ints(s)?;
    <[i64; 3]>::try_from(v).map_err(|_| format!("expected a,b,c, got {s:?}"))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

/// Comma-separated norm bounds at which running results are reported.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Ladder(pub Vec<u64>);

pub fn parse_ladder(s: &str) -> Result<Ladder, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Ladder)
}

#[derive(Args, Debug, Serialize)]
pub struct FnArg {
    /// Function spec: a kind name (one, dead_factor, split_sign, unit_indicator) or JSON
    /// such as {"kind":"archimedean","tau":0.5}
    #[arg(long = "fn", default_value = "one")]
    #[serde(rename = "fn")]
    pub function: String,
}

#[derive(Args, Debug, Serialize)]
pub struct FormArgs {
    /// Coefficients of ax^2 + by^2 + cz^2 + exy + fxz + gyz
    #[arg(long, value_parser = parse_form, default_value = "1,1,-1,0,0,0", allow_hyphen_values = true)]
    pub form: [i64; 6],

    /// The pair of variables kept factored
    #[arg(long, default_value = "xy")]
    pub pair: Pair,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Field invariants
    #[command(after_help = "CSV columns: d,disc,tau_case,w,minkowski_bound,class_number")]
    FieldInfo,

    /// Nonzero ideals up to a norm bound in HNF, sorted by (norm, a, b, c)
    #[command(after_help = "CSV columns: norm,a,b,c,principal,generator")]
    Ideals {
        #[arg(long, default_value_t = 50)]
        max_norm: u64,
    },

    /// Prime factorization of an element (--element) or an HNF ideal (--ideal)
    #[command(after_help = "CSV columns: prime,p,split,a,b,c,exponent")]
    Factor {
        #[arg(long, value_parser = parse_element, allow_hyphen_values = true, conflicts_with = "ideal")]
        element: Option<[i64; 2]>,
        /// a,b,c for the ideal aZ + (b + c tau)Z
        #[arg(long, value_parser = parse_hnf, allow_hyphen_values = true)]
        ideal: Option<[i64; 3]>,
    },

    /// Class group with generators of its cyclic factors
    #[command(after_help = "CSV columns: a,b,c,order,generator (ideal^order = (generator))")]
    ClassGroup,

    /// Dirichlet characters modulo a principal ideal, with the character sums over the unit residues
    #[command(after_help = "CSV columns: index,label,order,sum_re,sum_im")]
    Characters {
        /// Generator of the modulus
        #[arg(long, value_parser = parse_element, allow_hyphen_values = true)]
        modulus: [i64; 2],
    },

    /// Extensions of an element function to ideals, one per class
    #[command(after_help = "CSV columns: choice,generator,re,im (value at each class group generator)")]
    Extensions {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
    },

    /// Pretentious distance D(f, g; M, N)
    #[command(after_help = "CSV columns: M,N,distance")]
    Distance {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        /// Comparison function (same syntax as --fn)
        #[arg(long, default_value = "one")]
        with: String,
        #[arg(long = "M", default_value_t = 2)]
        m: u64,
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
    },

    /// Running averages over the ball of elements or ideals
    #[command(after_help = "CSV columns: N,re,im,abs")]
    Average {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
        #[arg(long, value_parser = parse_ladder)]
        checkpoints: Option<Ladder>,
        #[arg(long, value_enum, default_value_t = DomainArg::Elements)]
        domain: DomainArg,
    },

    /// Averages along every grid progression with coefficients up to --coeff-bound
    #[command(after_help = "CSV columns: a1,b1,a2,b2,re,im,abs,count")]
    ScanAperiodic {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
    },

    /// Predicted against empirical mean value of an ideal function
    #[command(
        after_help = "CSV columns: x,tau,r1,prediction_re,prediction_im,empirical_re,empirical_im,relative_gap,distance"
    )]
    Halasz {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, default_value_t = 100_000)]
        x: u64,
        /// Residue of the ideal-counting function; estimated at --r1-reference if omitted
        #[arg(long)]
        r1: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        r1_reference: u64,
    },

    /// Turan-Kubilius variance along the progression Qu + a
    #[command(after_help = "CSV columns: N,lhs,a_re,a_im,b,c,ratio,count")]
    Tk {
        #[arg(long, value_enum, default_value_t = AdditiveArg::Omega)]
        h: AdditiveArg,
        #[arg(long = "Q", value_parser = parse_element, allow_hyphen_values = true, default_value = "1,0")]
        q: [i64; 2],
        #[arg(long, value_parser = parse_element, allow_hyphen_values = true, default_value = "1,0")]
        a: [i64; 2],
        #[arg(long = "M", default_value_t = 1)]
        m: u64,
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
        #[arg(long, value_parser = parse_ladder)]
        checkpoints: Option<Ladder>,
    },

    /// Concentration of f along Qu + a around chi(a) N(Qu)^{i tau} exp(F)
    #[command(after_help = "CSV columns: N,empirical,rhs_bound,distance,f_sum_re,f_sum_im,count")]
    Concentrate {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        /// Character spec ({"kind":"character",...}); trivial modulo Q if omitted. Always modified.
        #[arg(long)]
        chi: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tau: f64,
        /// Ideal function f'; the first extension of f conj(chi) N^{-i tau} if omitted
        #[arg(long)]
        fprime: Option<String>,
        #[arg(long = "M", default_value_t = 2)]
        m: u32,
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
        #[arg(long = "Q", value_parser = parse_element, allow_hyphen_values = true)]
        q: [i64; 2],
        #[arg(long, value_parser = parse_element, allow_hyphen_values = true, default_value = "1,0")]
        a: [i64; 2],
        #[arg(long, value_enum, default_value_t = PhaseArg::Displayed)]
        phase: PhaseArg,
        /// Upper cutoff of the distance sum; defaults to N
        #[arg(long)]
        distance_cutoff: Option<u64>,
    },

    /// Folner window at level M
    #[command(after_help = "CSV columns: index,exponents,x,y,norm")]
    Folner {
        #[arg(long = "M", default_value_t = 3)]
        m: u32,
    },

    /// Fraction of each Folner window (levels 2..=M) divisible by --divisor
    #[command(after_help = "CSV columns: M,size,density")]
    Density {
        #[arg(long = "M", default_value_t = 4)]
        m: u32,
        #[arg(long, value_parser = parse_element, allow_hyphen_values = true)]
        divisor: [i64; 2],
    },

    /// Averages of the weight w_delta for a parametrized quadratic form
    #[command(after_help = "CSV columns: N,weight")]
    Weights {
        #[command(flatten)]
        #[serde(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long = "N", default_value_t = 100)]
        n: u64,
        #[arg(long, value_parser = parse_ladder)]
        checkpoints: Option<Ladder>,
    },

    /// Weighted correlation A_delta of f along the parametrization
    #[command(after_help = "CSV columns: N,re,im,abs,weight")]
    Adelta {
        #[command(flatten)]
        #[serde(flatten)]
        function: FnArg,
        #[command(flatten)]
        #[serde(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long = "Q", value_parser = parse_element, allow_hyphen_values = true, default_value = "1,0")]
        q: [i64; 2],
        #[arg(long = "N", default_value_t = 100)]
        n: u64,
        #[arg(long, value_parser = parse_ladder)]
        checkpoints: Option<Ladder>,
    },

    /// Solutions whose designated pair has one color
    #[command(after_help = "CSV columns: k,m,n,x,y,z,color (elements written (x,y))")]
    Search {
        #[command(flatten)]
        #[serde(flatten)]
        form: FormArgs,
        /// JSON coloring rule, e.g. {"kind":"norm_mod","modulus":3}
        #[arg(long)]
        coloring: PathBuf,
        /// Largest parameter coordinate
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },

    /// Prime-ideal sums with their ratios to the expected growth
    #[command(after_help = "CSV columns: N,epsilon,prime_powers,prime_powers_ratio,reciprocal_prime_powers,\
reciprocal_ratio,window,tail,tail_cutoff,log_weighted,two_prime,two_prime_ratio,reciprocal_primes")]
    PrimeSums {
        #[arg(long = "N", default_value_t = 10_000)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long)]
        tail_cutoff: Option<u64>,
    },
}
