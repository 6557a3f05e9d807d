use artin_core::{equals, normal_form, Word};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn long_word(len: usize) -> Word {
    // deterministic mix of letters and inverses
    let text: Vec<&str> = (0..len).map(|i| ["s", "t", "s^-1", "t", "t^-1", "s"][i * 7 % 6]).collect();
    Word::parse_dihedral(&text.join(" ")).unwrap()
}

fn bench_normal_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("normal_form");
    for len in [16, 64, 256] {
        let w = long_word(len);
        for m in [3u32, 4, 7] {
            group.bench_with_input(BenchmarkId::new(format!("m{m}"), len), &w, |b, w| {
                b.iter(|| normal_form(black_box(w), m))
            });
        }
    }
    group.finish();
}

fn bench_equals(c: &mut Criterion) {
    let w = long_word(128);
    let v = w.concat(&Word::parse_dihedral("s t s t^-1 s^-1 t^-1").unwrap());
    c.bench_function("equals_m3_len128", |b| b.iter(|| equals(black_box(&w), black_box(&v), 3)));
}

criterion_group!(benches, bench_normal_form, bench_equals);
criterion_main!(benches);
