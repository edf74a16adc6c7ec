//! Round trips of every text format on random inputs.

use num_bigint::BigInt;
use proptest::prelude::*;
use zreduce::formats::{
    emit_bundle, emit_circuit, emit_poly, parse_bundle, parse_circuit, parse_poly, parse_quad, parse_quad_list,
    CircuitFile,
};
use zreduce_core::pipeline::{Derived, WitnessBundle};
use zreduce_core::{Circuit, FieldD, Node, NodeId, QuadInt, SparsePoly, VarName};

fn arb_big() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        (-20i64..=20).prop_map(BigInt::from),
        any::<i64>().prop_map(BigInt::from),
        (any::<i128>(), any::<i128>()).prop_map(|(a, b)| BigInt::from(a) * BigInt::from(b)),
    ]
}

fn arb_quad() -> impl Strategy<Value = QuadInt> {
    (proptest::sample::select(vec![1u64, 2, 3, 5, 6, 7, 11, 13]), arb_big(), arb_big(), any::<bool>()).prop_map(
        |(d, a, b, half)| {
            let f = FieldD::new(d).unwrap();
            if half && d % 4 == 3 {
                QuadInt::from_doubled(f, 2 * a + 1, 2 * b + 1).unwrap()
            } else {
                QuadInt::new(f, a, b)
            }
        },
    )
}

fn names(n: usize) -> Vec<VarName> {
    (0..n).map(|i| VarName::new(format!("z{i}")).unwrap()).collect()
}

fn arb_poly() -> impl Strategy<Value = SparsePoly> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec((proptest::collection::vec(0u32..5, n), arb_big()), 0..10)
            .prop_map(move |terms| SparsePoly::from_terms(names(n), terms).unwrap())
    })
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    let leaf = prop_oneof![
        arb_big().prop_map(Node::Const),
        (0usize..4).prop_map(|i| Node::Var(VarName::new(format!("x{i}")).unwrap())),
    ];
    (leaf, proptest::collection::vec((0u8..4, any::<usize>(), any::<usize>(), 1u32..6), 0..20)).prop_map(
        |(first, ops)| {
            let mut nodes = vec![first];
            for (op, a, b, e) in ops {
                let (a, b) = (NodeId::new(a % nodes.len()), NodeId::new(b % nodes.len()));
                nodes.push(match op {
                    0 => Node::Add(a, b),
                    1 => Node::Sub(a, b),
                    2 => Node::Mul(a, b),
                    _ => Node::Pow(a, e),
                });
            }
            let out = NodeId::new(nodes.len() - 1);
            Circuit::from_parts(nodes, out).unwrap()
        },
    )
}

fn arb_bundle() -> impl Strategy<Value = WitnessBundle> {
    (
        arb_big(),
        proptest::collection::vec(arb_big(), 1..12),
        proptest::collection::vec(arb_big(), 4),
        proptest::option::of(arb_big()),
        any::<bool>(),
        proptest::collection::vec("[a-z ,=]{0,20}", 0..3),
    )
        .prop_map(|(a, values, d, tau, verified, notes)| WitnessBundle {
            a,
            values: values
                .into_iter()
                .enumerate()
                .map(|(i, v)| (VarName::new(format!("z{}", i + 1)).unwrap(), v))
                .collect(),
            derived: Derived {
                y: d[0].clone(),
                s: d[1].clone(),
                tau,
                a1: d[2].clone(),
                a2: d[3].clone(),
            },
            notes: notes.into_iter().map(|n| n.trim().to_string()).collect(),
            verified,
        })
}

proptest! {
    #[test]
    fn quad_literals_round_trip(x in arb_quad()) {
        prop_assert_eq!(parse_quad(x.field(), &x.to_string()).unwrap(), x);
    }

    #[test]
    fn quad_lists_round_trip(xs in proptest::collection::vec(arb_big(), 1..6)) {
        let f = FieldD::GAUSSIAN;
        let xs: Vec<QuadInt> = xs.chunks(2).map(|c| QuadInt::new(f, c[0].clone(), c.get(1).cloned().unwrap_or_default())).collect();
        let text: Vec<String> = xs.iter().map(ToString::to_string).collect();
        prop_assert_eq!(parse_quad_list(f, &text.join("; ")).unwrap(), xs);
    }

    #[test]
    fn polynomials_round_trip(p in arb_poly()) {
        let text = emit_poly(&p);
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(emit_poly(&back), text);
    }

    #[test]
    fn circuits_round_trip(c in arb_circuit(), degree in any::<u64>()) {
        let file = CircuitFile::new(c).with_header("degree_bound", degree);
        let text = emit_circuit(&file);
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(emit_circuit(&back), text);
    }

    #[test]
    fn bundles_round_trip(b in arb_bundle()) {
        let text = emit_bundle(&b);
        let back = parse_bundle(&text).unwrap();
        prop_assert_eq!(&back, &b);
        prop_assert_eq!(emit_bundle(&back), text);
    }
}
