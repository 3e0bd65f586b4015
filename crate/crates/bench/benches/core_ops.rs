use criterion::{criterion_group, criterion_main, Criterion};

use flcrys::laurent::{Fq, LoopMatrix};
use flcrys::loopgr;
use flcrys::padic;
use flcrys::rootdatum;
use flcrys::schubert;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_weyl_group(c: &mut Criterion) {
    let g2 = rootdatum::g2().unwrap();
    let sp4 = rootdatum::sp(4).unwrap();
    c.bench_function("weyl_group_g2", |b| b.iter(|| g2.weyl_group().len()));
    c.bench_function("weyl_group_sp4", |b| b.iter(|| sp4.weyl_group().len()));
}

fn bench_elementary_divisors(c: &mut Criterion) {
    let field = Fq::new(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = loopgr::random_k(3, field, 2, &mut rng)
        .mul(&LoopMatrix::u_power(&[2, 0, -1], field))
        .mul(&loopgr::random_k(3, field, 2, &mut rng));
    c.bench_function("elementary_divisors_gl3", |b| {
        b.iter(|| loopgr::elementary_divisors(&m).unwrap())
    });
}

fn bench_lambda(c: &mut Criterion) {
    c.bench_function("lambda_series_p5_d120", |b| b.iter(|| padic::lambda_series(5, 120)));
    let lam = padic::lambda_series(5, 60);
    c.bench_function("series_square_d60", |b| b.iter(|| lam.mul(&lam)));
}

fn bench_nabla_grid(c: &mut Criterion) {
    let d = rootdatum::sp(4).unwrap();
    let mu = flcrys::Coweight(vec![2, 1]);
    c.bench_function("nabla_smooth_sp4", |b| {
        b.iter(|| schubert::verify_nabla_smoothness(&d, &mu, 7).unwrap())
    });
}

criterion_group!(benches, bench_weyl_group, bench_elementary_divisors, bench_lambda, bench_nabla_grid);
criterion_main!(benches);
