use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use divsudoku::algebra::{
    construction_report, coset_partition, good_subspaces, intersection_conditions, stein_field_square, subspaces,
    ConstructionKind, GaloisField, QuadraticNearfield, Subspace,
};
use divsudoku::classification::{
    appendix_class_of, ds_classes, isotopism_classes, main_ds_classes, merged_classes,
    not_isotopic_to_transpose, translations_with_cycle, ClassPartition,
};
use divsudoku::enumeration::{canonicalize_to_template, enumerate_extensions, is_template_extension, total_standard_count};
use divsudoku::invariants::{combined_key, find_intercalates, intercalate_invariant, minisquare_invariant, InvariantKey, Invariant};
use divsudoku::multipart::{is_affine_collection, sigma, sigma_scan, synchronize, tri_partitions, PartitionGroup, PartitionUniverse};
use divsudoku::square::{ConjugateLabel, Isotopism};
use divsudoku::sudoku::{
    count_associative_triples, is_division_sudoku, is_division_sudoku_by_conjugates, is_division_sudoku_quasi,
    is_division_sudoku_shred, is_standard_division_sudoku,
};
use divsudoku::{corpus, LatinSquare, SudokuPartition, TriPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn extensions() -> &'static Vec<LatinSquare> {
    static CELL: OnceLock<Vec<LatinSquare>> = OnceLock::new();
    CELL.get_or_init(enumerate_extensions)
}

fn appendix() -> &'static Vec<LatinSquare> {
    static CELL: OnceLock<Vec<LatinSquare>> = OnceLock::new();
    CELL.get_or_init(corpus::appendix)
}

fn parts(v: &[&str]) -> Vec<SudokuPartition> {
    let mut p: Vec<SudokuPartition> = v.iter().map(|s| s.parse().unwrap()).collect();
    p.sort();
    p
}

fn index_sets(p: &ClassPartition) -> BTreeSet<BTreeSet<usize>> {
    p.members.iter().map(|m| m.iter().map(|&i| i + 1).collect()).collect()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn c01() -> Outcome {
    let t = Instant::now();
    let ext = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(enumerate_extensions);
    let el = t.elapsed();
    ensure!(ext.len() == 7741, "{} extensions", ext.len());
    ensure!(ext.iter().all(is_template_extension), "non-extension emitted");
    ensure!(el <= Duration::from_secs(60), "took {}", secs(el));
    Ok(format!("7741 template extensions, single-threaded in {}", secs(el)))
}

fn c02() -> Outcome {
    let n = total_standard_count();
    ensure!(n == 104015259648, "total {n}");
    ensure!(n == (1u64 << 11) * 3u64.pow(8) * 7741, "factorization mismatch");
    Ok(format!("{n} = 2^11 * 3^8 * 7741"))
}

fn c03() -> Outcome {
    let t = Instant::now();
    let p = ds_classes(extensions()).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let want: BTreeMap<usize, usize> =
        [(1, 1), (3, 9), (6, 3), (9, 22), (18, 7), (27, 15), (54, 129)].into_iter().collect();
    ensure!(p.len() == 186, "{} classes", p.len());
    ensure!(p.size_histogram() == want, "histogram {:?}", p.size_histogram());
    ensure!(el <= Duration::from_secs(300), "took {}", secs(el));
    Ok(format!("186 ds-classes, sizes {:?}, {}", want, secs(el)))
}

fn c04() -> Outcome {
    let t = Instant::now();
    let p = main_ds_classes(appendix()).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    ensure!(p.len() == 45, "{} main classes", p.len());
    let got = index_sets(&p);
    let table: BTreeSet<BTreeSet<usize>> = corpus::main_class_table().into_iter().map(|r| r.into_iter().collect()).collect();
    ensure!(got == table, "groupings differ from the table in {} rows", got.symmetric_difference(&table).count());
    for row in [vec![1, 53, 135], vec![3, 40, 42, 149, 163, 180], vec![4], vec![17], vec![51], vec![68], vec![175], vec![179], vec![183]] {
        ensure!(got.contains(&row.iter().copied().collect()), "row {row:?} missing");
    }
    ensure!(el <= Duration::from_secs(900), "took {}", secs(el));
    Ok(format!("45 main ds-classes matching every table row, {}", secs(el)))
}

fn c05() -> Outcome {
    let t = Instant::now();
    let p = isotopism_classes(appendix()).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    ensure!(p.len() == 183, "{} isotopism classes", p.len());
    let merged: BTreeSet<Vec<usize>> =
        merged_classes(&p).into_iter().map(|m| m.into_iter().map(|i| i + 1).collect()).collect();
    let want: BTreeSet<Vec<usize>> = [vec![18, 19], vec![21, 60], vec![33, 117]].into_iter().collect();
    ensure!(merged == want, "merges {merged:?}");
    ensure!(el <= Duration::from_secs(3600), "took {}", secs(el));
    Ok(format!("183 isotopism classes, merges {{18,19}} {{21,60}} {{33,117}}, {}", secs(el)))
}

fn c06() -> Outcome {
    let keys: Vec<(u64, u64)> = appendix().iter().map(|l| combined_key(l).unwrap()).collect();
    let i: BTreeSet<u64> = keys.iter().map(|k| k.0).collect();
    let m: BTreeSet<u64> = keys.iter().map(|k| k.1).collect();
    let b: BTreeSet<(u64, u64)> = keys.iter().copied().collect();
    ensure!((i.len(), m.len(), b.len()) == (148, 139, 183), "counts {} {} {}", i.len(), m.len(), b.len());
    Ok("148 iota, 139 mu, 183 combined values".into())
}

fn c07() -> Outcome {
    let iota = intercalate_invariant(&corpus::named("EX-INTERCALATE")).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = iota.to_string().split_whitespace().map(String::from).collect();
    let want: BTreeSet<String> =
        ["(B1,S3,P3)", "(B2,S2,P1)", "(B3,S1,P2)", "(B3,S3,P1)"].iter().map(|s| s.to_string()).collect();
    ensure!(got == want, "iota {iota}");
    let mu = minisquare_invariant(&corpus::named("EX-MINISQUARE")).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = mu.edge_strings().into_iter().collect();
    let want: BTreeSet<String> =
        ["B1->S1", "B2->S3", "B3->S2", "P1->S2", "P2->S1", "P3->S3"].iter().map(|s| s.to_string()).collect();
    ensure!(got == want, "mu {mu}");
    Ok(format!("iota = {iota}; mu = {mu}"))
}

fn c08() -> Outcome {
    let table = corpus::tripartition_table();
    let want_pi = [(2, 2), (17, 24), (18, 4), (20, 9), (27, 2), (175, 3), (179, 4)];
    for (i, pi) in want_pi {
        let t = Instant::now();
        let got = tri_partitions(&corpus::ds(i)).map_err(|e| e.to_string())?;
        let el = t.elapsed();
        ensure!(got.len() == pi, "pi(DS(9,{i})) = {}", got.len());
        ensure!(el <= Duration::from_secs(10), "DS(9,{i}) took {}", secs(el));
        let printed: BTreeSet<&TriPartition> = table[&i].iter().collect();
        let computed: BTreeSet<&TriPartition> = got.iter().collect();
        ensure!(printed.len() == table[&i].len(), "duplicate rows printed for DS(9,{i})");
        ensure!(printed == computed, "table differs for DS(9,{i})");
    }
    Ok("pi = 2, 24, 4, 9, 2, 3, 4 and all seven tri-partition lists reproduced".into())
}

fn c09() -> Outcome {
    let mut special = BTreeMap::new();
    let mut max = 0;
    for (k, l) in appendix().iter().enumerate() {
        let s = synchronize(l).map_err(|e| e.to_string())?;
        for p in &s.partitions {
            ensure!(
                is_division_sudoku(&s.square, &TriPartition::synchronized(p.clone())).unwrap(),
                "class {} emitted an unverified partition",
                k + 1
            );
        }
        max = max.max(s.sigma());
        if s.sigma() != 1 {
            special.insert(k + 1, s.sigma());
        }
    }
    let want: BTreeMap<usize, usize> = [(17, 4), (175, 3), (179, 4)].into_iter().collect();
    ensure!(special == want, "classes with sigma > 1: {special:?}");
    ensure!(max == 4, "max sigma {max}");
    let four = parts(&["{123 456 789}", "{147 258 369}", "{159 267 348}", "{168 249 357}"]);
    ensure!(sigma(&corpus::named("L17")).unwrap() == four, "L17 partitions");
    ensure!(
        sigma(&corpus::named("L175")).unwrap() == parts(&["{123 456 789}", "{147 258 369}", "{168 249 357}"]),
        "L175 partitions"
    );
    ensure!(
        sigma(&corpus::named("L179")).unwrap() == parts(&["{123 456 789}", "{149 257 368}", "{158 269 347}", "{167 248 359}"]),
        "L179 partitions"
    );
    let g = PartitionGroup::standard(3);
    let s17 = synchronize(&corpus::ds(17)).unwrap();
    ensure!(g.maps_set(&s17.partitions, &four), "class 17 output not in the orbit of L17's partitions");
    Ok("sigma 4, 3, 4 for classes 17, 175, 179 and 1 elsewhere; printed partition sets exact; sigma(3) = 4".into())
}

fn c10() -> Outcome {
    let l0 = corpus::named("L0");
    ensure!(is_standard_division_sudoku(&l0), "L0 not a division sudoku");
    let n = count_associative_triples(&l0);
    ensure!(n == 9, "{n} associative triples");
    let s = sigma(&l0).unwrap();
    ensure!(s == sigma(&corpus::named("L17")).unwrap() && s.len() == 4, "sigma(L0) partitions {s:?}");
    Ok("L0 is a division sudoku with 9 associative triples and the four partitions of L17".into())
}

fn c11() -> Outcome {
    let q = corpus::named("Q");
    let mut failed = Vec::new();
    let mut note = |ok: bool, what: &str| {
        if !ok {
            failed.push(what.to_string());
        }
    };
    note(q.is_idempotent(), "idempotent");
    let ics = find_intercalates(&q);
    note(ics.len() == 18, "18 intercalates");
    let mut per_diag = [0usize; 9];
    let mut opposite_ok = true;
    let mut one_diag = true;
    for ic in &ics {
        let cells = [(ic.rows.0, ic.cols.0), (ic.rows.0, ic.cols.1), (ic.rows.1, ic.cols.0), (ic.rows.1, ic.cols.1)];
        let diag: Vec<(usize, usize)> = cells.iter().copied().filter(|(r, c)| r == c).collect();
        if diag.len() != 1 {
            one_diag = false;
            continue;
        }
        let (d, _) = diag[0];
        per_diag[d] += 1;
        let (or, oc) = cells.iter().copied().find(|&(r, c)| r != d && c != d).unwrap();
        opposite_ok &= or / 3 == oc / 3;
    }
    note(one_diag, "one diagonal cell per intercalate");
    note(per_diag.iter().all(|&k| k == 2), "two intercalates per diagonal cell");
    note(opposite_ok, "opposite corner in a diagonal minisquare");
    let mu = minisquare_invariant(&q).unwrap();
    let got: BTreeSet<String> = mu.edge_strings().into_iter().collect();
    let want: BTreeSet<String> = (1..=3).flat_map(|i| [format!("P{i}->B{i}"), format!("P{i}->S{i}")]).collect();
    note(got == want, &format!("mu edges {{Pi->Bi, Pi->Si}} (computed {mu})"));
    let (left, right) = translations_with_cycle(&q, 4);
    note(left.iter().all(|&b| b) && right.iter().all(|&b| !b), "4-cycles in left but not right translations");
    note(not_isotopic_to_transpose(&q).unwrap_or(false), "not isotopic to its transpose");
    let forms = [
        (q.clone(), 121),
        (q.transpose(), 129),
        (q.conjugate(ConjugateLabel::T13), 186),
        (q.conjugate(ConjugateLabel::T13).transpose(), 105),
        (q.conjugate(ConjugateLabel::T23), 91),
        (q.conjugate(ConjugateLabel::T23).transpose(), 160),
    ];
    for (l, want) in forms {
        let c = appendix_class_of(&l).unwrap();
        note(c == Some(want), &format!("conjugate class {want} (got {c:?})"));
    }
    if failed.is_empty() {
        Ok("all intercalate, mu, translation, transpose and conjugate-class facts hold".into())
    } else {
        Err(format!("failed sub-checks: {}", failed.join("; ")))
    }
}

fn nearfield_axioms(nf: &QuadraticNearfield, triples: &[(usize, usize, usize)]) -> bool {
    let f = nf.field();
    let m1 = f.neg(1);
    triples.iter().all(|&(x, y, z)| {
        nf.mul(x, f.add(y, z)) == f.add(nf.mul(x, y), nf.mul(x, z))
            && nf.mul(x, nf.mul(y, z)) == nf.mul(nf.mul(x, y), z)
            && nf.mul(f.neg(x), y) == f.neg(nf.mul(x, y))
            && nf.mul(x, f.neg(y)) == f.neg(nf.mul(x, y))
    }) && f.elements().all(|x| {
        nf.mul(0, x) == 0
            && nf.mul(x, 0) == 0
            && nf.mul(m1, x) == f.neg(x)
            && nf.mul(x, m1) == f.neg(x)
            && (x == 0 || (nf.mul(x, nf.inv(x)) == 1 && nf.mul(nf.inv(x), x) == 1))
    })
}

fn c12() -> Outcome {
    let field = construction_report(3, ConstructionKind::Field, None, true).map_err(|e| e.to_string())?;
    ensure!(field.exact_sigma == Some(4), "field sigma {:?}", field.exact_sigma);
    ensure!(field.isotopic_to_group, "field square not isotopic to a group");
    ensure!(field.ds_class == Some(17), "field class {:?}", field.ds_class);
    let near = construction_report(3, ConstructionKind::Nearfield, None, true).map_err(|e| e.to_string())?;
    ensure!(near.exact_sigma == Some(4), "nearfield sigma {:?}", near.exact_sigma);
    ensure!(!near.isotopic_to_group, "nearfield square isotopic to a group");
    ensure!(near.ds_class == Some(179), "nearfield class {:?}", near.ds_class);
    let d9 = QuadraticNearfield::new(3).unwrap();
    let all9: Vec<_> = (0..9).flat_map(|x| (0..9).flat_map(move |y| (0..9).map(move |z| (x, y, z)))).collect();
    ensure!(nearfield_axioms(&d9, &all9), "D9 axioms");
    let d25 = QuadraticNearfield::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let sample: Vec<_> = (0..5000).map(|_| (rng.gen_range(0..25), rng.gen_range(0..25), rng.gen_range(0..25))).collect();
    ensure!(nearfield_axioms(&d25, &sample), "D25 axioms");
    Ok("field: sigma 4, group isotope, class 17; nearfield: sigma 4, not a group isotope, class 179; D9 and D25 axioms hold".into())
}

fn c13() -> Outcome {
    let f = GaloisField::new(2, 4).unwrap();
    let c = divsudoku::algebra::default_c(4).unwrap();
    let total = subspaces(&f, 2, 2).unwrap().len();
    let good = good_subspaces(&f, 2, 2, c).unwrap();
    ensure!(total == 35 && good.len() == 20, "{} good of {total}", good.len());
    let l = stein_field_square(4, c).unwrap();
    for w in &good {
        let p = coset_partition(&f, w).unwrap();
        ensure!(is_division_sudoku(&l, &TriPartition::synchronized(p)).unwrap(), "coset partition fails");
    }
    let lines: Vec<SudokuPartition> = subspaces(&f, 4, 1).unwrap().iter().map(|w| coset_partition(&f, w).unwrap()).collect();
    ensure!(lines.len() == 5 && is_affine_collection(&lines).unwrap(), "line partitions not affine");
    ensure!(PartitionUniverse::cached(4).len() == 2_627_625, "universe size");
    let t = Instant::now();
    let s = sigma_scan(&l).unwrap().len();
    let el = t.elapsed();
    ensure!(s >= 20, "scan sigma {s}");
    ensure!(el <= Duration::from_secs(600), "scan took {}", secs(el));
    Ok(format!("20 of 35 good, all verify, 5 lines affine; full scan of 2627625 partitions gives sigma = {s} in {}", secs(el)))
}

fn c14() -> Outcome {
    let f = GaloisField::new(3, 4).unwrap();
    let c = divsudoku::algebra::default_c(9).unwrap();
    let total = subspaces(&f, 3, 2).unwrap().len();
    let good = good_subspaces(&f, 3, 2, c).unwrap().len();
    ensure!(total == 130 && good == 90, "{good} good of {total}");
    Ok("90 good of 130 two-dimensional GF(3)-subspaces of GF(81)".into())
}

fn c15() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let std3 = TriPartition::standard(3);
    let predicates = |l: &LatinSquare| -> [bool; 4] {
        [
            is_division_sudoku(l, &std3).unwrap(),
            is_division_sudoku_by_conjugates(l, &std3).unwrap(),
            is_division_sudoku_shred(l, &std3).unwrap(),
            is_division_sudoku_quasi(l, &std3).unwrap(),
        ]
    };
    let agree = |v: [bool; 4]| v.iter().all(|&b| b == v[0]);
    let mut corpus_squares: Vec<LatinSquare> = corpus::entries().into_iter().map(|e| e.square).collect();
    corpus_squares.extend(appendix().iter().take(50).map(|l| l.apply_isotopism(&Isotopism::random_ds(3, &mut rng)).unwrap()));
    for l in &corpus_squares {
        ensure!(agree(predicates(l)), "predicates disagree on a corpus square");
    }
    let mut positives = 0;
    for _ in 0..10_000 {
        let l = divsudoku::random::random_latin_square(9, &mut rng);
        let v = predicates(&l);
        ensure!(agree(v), "predicates disagree on a random square");
        positives += v[0] as usize;
    }
    let mut extra = 0;
    for k in 0..2000 {
        let l = if k % 2 == 0 {
            divsudoku::random::random_sudoku(3, &mut rng)
        } else {
            appendix()[rng.gen_range(0..186)].apply_isotopism(&Isotopism::random_ds(3, &mut rng)).unwrap()
        };
        let v = predicates(&l);
        ensure!(agree(v), "predicates disagree on a random sudoku or ds-isotope");
        extra += v[0] as usize;
    }
    for _ in 0..1000 {
        let l = &appendix()[rng.gen_range(0..186)];
        let image = l.apply_isotopism(&Isotopism::random_ds(3, &mut rng)).unwrap();
        let keys = |x: &LatinSquare| -> (InvariantKey, InvariantKey) {
            (
                Invariant::Intercalate(intercalate_invariant(x).unwrap()).canonical_key(),
                Invariant::Minisquare(minisquare_invariant(x).unwrap()).canonical_key(),
            )
        };
        ensure!(keys(l) == keys(&image), "invariants changed under a ds-isotopism");
    }
    for _ in 0..1000 {
        let l = &appendix()[rng.gen_range(0..186)];
        let image = l.apply_isotopism(&Isotopism::random_ds(3, &mut rng)).unwrap();
        let (canon, iso) = canonicalize_to_template(&image).unwrap();
        ensure!(is_template_extension(&canon), "canonical form misses the template");
        ensure!(iso.is_ds(&SudokuPartition::standard(3)), "canonicalizing map is not a ds-isotopism");
        ensure!(image.apply_isotopism(&iso).unwrap() == canon, "canonicalizing map does not reproduce the form");
        ensure!(canonicalize_to_template(&canon).unwrap().0 == canon, "canonical form not fixed");
    }
    let fields = [(GaloisField::new(2, 4).unwrap(), vec![2, 4]), (GaloisField::new(3, 4).unwrap(), vec![3, 9])];
    for _ in 0..1000 {
        let (f, orders) = &fields[rng.gen_range(0..2)];
        let r = orders[rng.gen_range(0..orders.len())];
        let max_dim = match (f.order(), r) {
            (16, 2) | (81, 3) => 4,
            _ => 2,
        };
        let dim = rng.gen_range(1..=max_dim);
        let w = loop {
            let basis: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..f.order())).collect();
            if let Ok(w) = Subspace::spanned(f, r, &basis) {
                break w;
            }
        };
        let c = rng.gen_range(2..f.order());
        let conds = intersection_conditions(f, &w, c);
        ensure!(conds[0] == conds[1] && conds[1] == conds[2], "three conditions disagree");
    }
    Ok(format!(
        "predicates agree on {} corpus squares, 10000 random latin squares ({positives} division sudokus) and 2000 random sudokus and ds-isotopes ({extra} division sudokus); 1000 invariant, 1000 canonicalization and 1000 (W,c) checks pass",
        corpus_squares.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("template extension count", c01),
        ("total standard count", c02),
        ("ds-classification", c03),
        ("main ds-classes", c04),
        ("isotopism classes", c05),
        ("invariant power", c06),
        ("worked invariant examples", c07),
        ("pi table and tri-partition lists", c08),
        ("synchronization", c09),
        ("L0 facts", c10),
        ("the square Q", c11),
        ("algebra q = 3", c12),
        ("algebra q = 4", c13),
        ("algebra q = 9 subspaces", c14),
        ("property suites", c15),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let el = secs(start.elapsed());
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS [{el}] {name}: {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL [{el}] {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
