use gptkit::jordan::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for kind in [JordanKind::RealSym(3), JordanKind::ComplexHerm(2), JordanKind::ComplexHerm(3), JordanKind::QuatHerm(2), JordanKind::QuatHerm(3), JordanKind::Spin(3)] {
        let sys = JordanSystem::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let mut worst = 0.0f64;
        for _ in 0..2000 {
            let a = sys.random(&mut rng);
            let (frame, vals) = sys.spectral_decompose(&a);
            if frame.len() != sys.rank() { println!("{kind:?}: BAD frame len {}", frame.len()); }
            let mut acc = sys.zero();
            for (e, t) in frame.iter().zip(&vals) {
                acc = sys.add(&acc, &sys.scale(e, *t));
            }
            let rec = sys.norm(&sys.sub(&acc, &a));
            // orthogonality + idempotency
            let mut ores = 0.0f64;
            for i in 0..frame.len() { for j in 0..frame.len() {
                let p = sys.product(&frame[i], &frame[j]);
                let expect = if i == j { frame[i].clone() } else { sys.zero() };
                ores = ores.max(sys.norm(&sys.sub(&p, &expect)));
            }}
            worst = worst.max(rec).max(ores);
        }
        println!("{kind:?}: worst residual over 2000 samples = {worst:.3e}");
    }
}
