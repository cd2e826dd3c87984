use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qexpr_core::ansatz::{build_template, sample_parameters, prepare_state};
use qexpr_core::expressibility::{frame_potential, sample_fidelities, SampleMode};
use qexpr_core::moment::MomentChain;
use qexpr_core::statevector::{StateVector, UnitaryMatrix};
use qexpr_core::AnsatzSpec;

fn bench_gate_application(c: &mut Criterion) {
    let mut rng = qexpr_core::rng::stream(1, 0);
    let gate = UnitaryMatrix::haar_random(2, &mut rng);
    c.bench_function("apply_two_qubit_gate_n10", |b| {
        b.iter_batched(
            || StateVector::haar_random(10, &mut rng),
            |mut state| state.apply_gate(&gate, &[3, 7]).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_haar_unitary(c: &mut Criterion) {
    let mut rng = qexpr_core::rng::stream(2, 0);
    c.bench_function("haar_unitary_4_qubits", |b| {
        b.iter(|| UnitaryMatrix::haar_random(4, &mut rng))
    });
}

fn bench_circuit_preparation(c: &mut Criterion) {
    let spec = AnsatzSpec::alt(8, 3, 4, 4);
    let template = build_template(&spec).unwrap();
    let mut rng = qexpr_core::rng::stream(3, 0);
    c.bench_function("prepare_alt_n8_l3", |b| {
        b.iter_batched(
            || sample_parameters(&template, &mut rng),
            |params| prepare_state(&template, &params).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_chain_build(c: &mut Criterion) {
    c.bench_function("moment_chain_build_l2_m4", |b| {
        b.iter(|| MomentChain::build(2, 4).unwrap())
    });
}

fn bench_frame_potential_sampling(c: &mut Criterion) {
    let spec = AnsatzSpec::hea(4, 2);
    c.bench_function("frame_potential_hea_n4_1k_pairs", |b| {
        b.iter(|| {
            let sample = sample_fidelities(&spec, 1000, SampleMode::Parameterized, 9).unwrap();
            frame_potential(&sample, 2).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_gate_application,
    bench_haar_unitary,
    bench_circuit_preparation,
    bench_chain_build,
    bench_frame_potential_sampling
);
criterion_main!(benches);
