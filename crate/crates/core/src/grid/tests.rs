use super::*;
use crate::classes::{is_grid, make_grid, relation_symbol, GraphClass};
use crate::enumerate::{enumerate_structures, labeled_grids};
use crate::eval::{satisfies, EvalConfig};
use crate::formula::{pi_level, sigma_level, Formula, Fragment};
use crate::structure::Structure;

fn letter(bits: &str, s: usize) -> Cell {
    Some((bits.chars().map(|c| c == '1').collect(), s))
}

fn all_patterns(bits: &str, s: usize) -> Vec<Tile> {
    Pattern::ALL
        .iter()
        .map(|p| {
            let b = p.border();
            Tile([0, 1, 2, 3].map(|i| if b[i] { None } else { letter(bits, s) }))
        })
        .collect()
}

fn system(t: usize, states: usize, tiles: Vec<Tile>) -> TilingSystem {
    let names = (1..=states).map(|i| format!("w{i}")).collect();
    TilingSystem::new(t, names, tiles).unwrap().0
}

#[test]
fn partition_groups() {
    let ts = system(0, 1, all_patterns("", 0));
    let p = ts.partition();
    let sizes: Vec<usize> = (1..=4).map(|i| p.group(i).len()).collect();
    assert_eq!(sizes, vec![4, 2, 2, 1]);
    let reps: Vec<usize> = Pattern::ALL.iter().map(|p| p.representative()).collect();
    assert_eq!(reps, vec![1, 1, 1, 1, 2, 2, 3, 3, 4]);
}

#[test]
fn empty_system_rejects_everything() {
    let ts = system(1, 1, vec![]);
    for g in labeled_grids(1, 4).unwrap() {
        assert!(!recognizes(&ts, &g).unwrap());
        assert!(!satisfies(&g, &ts_to_sigma1_hg(&ts), EvalConfig::default()).unwrap());
    }
}

#[test]
fn full_system_accepts_everything() {
    let ts = system(0, 1, all_patterns("", 0));
    let f = ts_to_sigma1_hg(&ts);
    for (m, n) in [(1, 1), (1, 3), (2, 2), (3, 2), (3, 3)] {
        let g = make_grid(m, n, &[]).unwrap();
        assert!(recognizes(&ts, &g).unwrap(), "{m}x{n}");
        assert!(satisfies(&g, &f, EvalConfig::default()).unwrap(), "{m}x{n}");
    }
}

#[test]
fn conflicting_corner_tiles() {
    // On a 1x1 grid the single cell is seen by the TL and TR windows.
    let mut tiles = vec![
        Tile([None, None, None, letter("", 0)]),
        Tile([None, None, letter("", 1), None]),
    ];
    for s in 0..2 {
        tiles.push(Tile([None, letter("", s), None, None]));
        tiles.push(Tile([letter("", s), None, None, None]));
    }
    let ts = system(0, 2, tiles);
    let g = make_grid(1, 1, &[]).unwrap();
    assert!(!recognizes(&ts, &g).unwrap());
    assert!(!satisfies(&g, &ts_to_sigma1_hg(&ts), EvalConfig::default()).unwrap());
}

#[test]
fn text_round_trip_and_warnings() {
    let text = "ts t=1\nstates a b\ntile 1:a 0:b / # #\ntile # # / # #\ntile # 1:a / 0:b #\n";
    let (ts, warnings) = parse_tiling_system(text).unwrap();
    assert_eq!(ts.tiles.len(), 1);
    assert_eq!(warnings.len(), 2);
    assert_eq!(ts.tiles[0].pattern(), Some(Pattern::B));
    let (back, w) = parse_tiling_system(&ts.to_string()).unwrap();
    assert!(w.is_empty());
    assert_eq!(back, ts);
    assert!(parse_tiling_system("ts t=1\nstates\n").is_err());
    assert!(parse_tiling_system("ts t=1\nstates a\ntile 11:a # / # #\n").is_err());
    assert!(parse_tiling_system("ts t=1\nstates a\ntile 1:c # / # #\n").is_err());
}

#[test]
fn tile_formula_shapes() {
    let ts = system(0, 1, vec![]);
    let x = Formula::set(&state_symbol(0));
    let tl = Tile([None, None, None, letter("", 0)]);
    assert_eq!(tile_formula(&ts, &tl), x);
    let br = Tile([letter("", 0), None, None, None]);
    let (r1, r2) = (relation_symbol(2, 1), relation_symbol(2, 2));
    let expect = Formula::and(Formula::and(x, Formula::bx(&r1, Formula::bot())), Formula::bx(&r2, Formula::bot()));
    assert_eq!(tile_formula(&ts, &br), expect);
}

#[test]
fn compiled_sentence_is_sigma1_hg() {
    let ts = system(1, 2, all_patterns("1", 1));
    let f = ts_to_sigma1_hg(&ts);
    assert_eq!(sigma_level(&f, Fragment::HG).unwrap(), Some(1));
}

#[test]
fn runs_pass_their_own_audit() {
    // Label 1 exactly on the first column; state 1 marks that column.
    let mut tiles = Vec::new();
    for p in Pattern::ALL {
        let b = p.border();
        for code in 0..16usize {
            let cells = [0, 1, 2, 3].map(|i| (!b[i]).then(|| code >> i & 1));
            let ok = (0..4).all(|i| match cells[i] {
                Some(s) if i % 2 == 1 => (s == 1) == b[i - 1],
                _ => true,
            });
            // Border entries carry bit 0 so every tile is produced once.
            if ok && (0..4).all(|i| !b[i] || code >> i & 1 == 0) {
                tiles.push(Tile(cells.map(|c| c.map(|s| (vec![s == 1], s)))));
            }
        }
    }
    let ts = system(1, 2, tiles);
    let f = ts_to_sigma1_hg(&ts);
    let mut accepted = 0;
    for g in labeled_grids(1, 4).unwrap() {
        let run = find_run(&ts, &g).unwrap();
        if let Some(run) = &run {
            assert!(check_run(&ts, &g, run).unwrap());
            accepted += 1;
        }
        assert_eq!(run.is_some(), satisfies(&g, &f, EvalConfig::default()).unwrap());
    }
    // One accepted picture per shape.
    assert_eq!(accepted, 8);
}

#[test]
fn grid_characterization_examples() {
    let f = grid_characterization();
    let cfg = EvalConfig::default();
    assert!(satisfies(&make_grid(2, 2, &[]).unwrap(), &f, cfg).unwrap());
    assert!(satisfies(&make_grid(1, 1, &[]).unwrap(), &f, cfg).unwrap());
    let cycle = Structure::new(2)
        .unwrap()
        .with_pairs(&relation_symbol(2, 1), [(0, 1), (1, 0)])
        .unwrap()
        .with_pairs(&relation_symbol(2, 2), [])
        .unwrap();
    assert!(!satisfies(&cycle, &f, cfg).unwrap());
    let b = &grid_properties()[1];
    assert_eq!(b.label, 'b');
    assert!(!satisfies(&cycle, &b.formula, cfg).unwrap());
    assert_eq!(pi_level(&f, Fragment::HBG).unwrap(), Some(1));
}

#[test]
fn grid_characterization_exact_small() {
    let f = grid_characterization();
    for a in enumerate_structures(&GraphClass::Digraph { t: 0, u: 2 }, 2, false).unwrap() {
        assert_eq!(satisfies(&a, &f, EvalConfig::default()).unwrap(), is_grid(&a), "{a:?}");
    }
}
