use proptest::prelude::*;
use spectra_cli::{BuiltinName, BuiltinSpec, ExplicitSpec, Problem, ProblemSpec};
use spectra_core::SolverConfig;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        -1e-6..1e-6f64,
        Just(0.0),
        any::<f64>().prop_filter("finite", |x| x.is_finite())
    ]
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<[f64; 2]>>> {
    prop::collection::vec(
        prop::collection::vec((finite(), finite()).prop_map(|(a, b)| [a, b]), c),
        r,
    )
}

fn builtin() -> impl Strategy<Value = Problem> {
    (
        prop_oneof![
            Just(BuiltinName::Quartic),
            Just(BuiltinName::Dirac),
            Just(BuiltinName::Transport)
        ],
        1usize..4096,
        prop::option::of(finite()),
        prop::option::of(finite()),
    )
        .prop_map(|(name, n, kappa, tau)| {
            Problem::Builtin(BuiltinSpec {
                name,
                n,
                kappa,
                tau,
            })
        })
}

fn explicit() -> impl Strategy<Value = Problem> {
    (1usize..4, 0usize..4).prop_flat_map(|(n1, n2)| {
        (
            matrix(n1, n1),
            matrix(n1, n2),
            matrix(n2, n2),
            matrix(n1, n1),
            matrix(n2, n2),
        )
            .prop_map(move |(a11, a12, a22, g1, g2)| {
                Problem::Explicit(ExplicitSpec {
                    n1,
                    n2,
                    a11,
                    a12,
                    a22,
                    g1,
                    g2,
                })
            })
    })
}

fn solver() -> impl Strategy<Value = Option<SolverConfig>> {
    prop::option::of(
        (
            1e-16..1.0f64,
            1e-16..1.0f64,
            1e-16..1e-3f64,
            1usize..1_000_000,
            any::<bool>(),
        )
            .prop_map(|(abs, rel, zero, max, parallel)| SolverConfig {
                lambda_tol_abs: abs,
                lambda_tol_rel: rel,
                zero_tol: zero,
                max_bisections: max,
                parallel,
                ..SolverConfig::default()
            }),
    )
}

proptest! {
    #[test]
    fn problem_spec_json_roundtrip(problem in prop_oneof![builtin(), explicit()], solver in solver()) {
        let spec = ProblemSpec { problem, solver };
        let text = spec.to_json();
        let parsed = ProblemSpec::from_json(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(parsed.to_json(), text);
    }
}
