mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use xcross::analysis::{adjacent_correlation, entropy, histogram_chi_square, Direction, Glcm};
use xcross::ibt::{bits_to_block, block_to_bits, ibt_apply, ibt_invert, ibt_stage, ibt_stage_invert};
use xcross::image_io::{read_pgm, write_pgm, PadNote};
use xcross::key_schedule::{ExtractionKey, OperationMatrix, SBox};
use xcross::permutation::{
    permute_image, split_quadrants, unpermute_image, xcross_permute, xcross_source_positions, xcross_unpermute, Block,
};
use xcross::substitution::{substitution_stage, substitution_stage_invert, SubstitutionSuite};
use xcross::{derive_context, GrayImage, KeyMaterial};

fn block(max_half: usize) -> impl Strategy<Value = Block> {
    (2..=max_half, 2..=max_half).prop_flat_map(|(hr, hc)| {
        proptest::collection::vec(any::<u8>(), 4 * hr * hc).prop_map(move |px| Block::new(2 * hr, 2 * hc, px).unwrap())
    })
}

/// Images whose sides are multiples of 4, up to `4 * max_quarter`.
fn cipher_image(max_quarter: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_quarter, 1..=max_quarter).prop_flat_map(|(qr, qc)| {
        proptest::collection::vec(any::<u8>(), 16 * qr * qc)
            .prop_map(move |px| GrayImage::new(4 * qr, 4 * qc, px).unwrap())
    })
}

fn any_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<u8>(), r * c).prop_map(move |px| GrayImage::new(r, c, px).unwrap())
    })
}

fn key() -> impl Strategy<Value = KeyMaterial> {
    any::<u64>().prop_map(|seed| KeyMaterial::random(&mut support::rng(seed)))
}

fn shuffled(len: usize, seed: u64) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..len as u32).collect();
    perm.shuffle(&mut support::rng(seed));
    perm
}

fn sbox(seed: u64) -> SBox {
    let perm = shuffled(256, seed);
    let mut table = [0u8; 256];
    for (t, p) in table.iter_mut().zip(perm) {
        *t = p as u8;
    }
    SBox::from_table(table).unwrap()
}

fn popcount(b: &Block) -> u32 {
    b.pixels().iter().map(|p| p.count_ones()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xcross_round_trip_and_multiset(b in block(10)) {
        let p = xcross_permute(&b).unwrap();
        prop_assert_eq!(&xcross_unpermute(&p).unwrap(), &b);
        let mut before = b.pixels().to_vec();
        let mut after = p.pixels().to_vec();
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn xcross_is_positional(b in block(10)) {
        let src = xcross_source_positions(b.rows(), b.cols()).unwrap();
        let p = xcross_permute(&b).unwrap();
        for (k, &s) in src.iter().enumerate() {
            prop_assert_eq!(p.pixels()[k], b.pixels()[s]);
        }
    }

    #[test]
    fn cascade_round_trip(img in cipher_image(6)) {
        let q = split_quadrants(&img).unwrap();
        prop_assert_eq!(unpermute_image(&permute_image(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn bits_round_trip(b in block(8)) {
        let bits = block_to_bits(&b);
        prop_assert_eq!(bits.len(), b.pixels().len() * 8);
        prop_assert_eq!(bits.count_ones() as u32, popcount(&b));
        prop_assert_eq!(bits_to_block(&bits, b.rows(), b.cols()).unwrap(), b);
    }

    #[test]
    fn ibt_conserves_popcount_and_inverts(b in block(8), seed in any::<u64>()) {
        let key = ExtractionKey::from_perm(shuffled(b.pixels().len() * 8, seed)).unwrap();
        let out = ibt_apply(&b, &key).unwrap();
        prop_assert_eq!(popcount(&out), popcount(&b));
        prop_assert_eq!(&ibt_invert(&out, &key).unwrap(), &b);
        // inverting with a key equals applying its inverse permutation
        prop_assert_eq!(ibt_invert(&b, &key).unwrap(), ibt_apply(&b, &key.inverse()).unwrap());
    }

    #[test]
    fn ibt_is_positional(b in block(6), seed in any::<u64>()) {
        let perm = shuffled(b.pixels().len() * 8, seed);
        let key = ExtractionKey::from_perm(perm.clone()).unwrap();
        let src = block_to_bits(&b);
        let out = block_to_bits(&ibt_apply(&b, &key).unwrap());
        for (j, &k) in perm.iter().enumerate() {
            prop_assert_eq!(out.bits()[j], src.bits()[k as usize]);
        }
    }

    #[test]
    fn ibt_stage_round_trip(img in cipher_image(4), seed in any::<u64>()) {
        let q = split_quadrants(&img).unwrap();
        let len = q.a.pixels().len() * 8;
        let keys = [0u64, 1, 2, 3].map(|i| ExtractionKey::from_perm(shuffled(len, seed ^ i)).unwrap());
        let out = ibt_stage(&q, &keys).unwrap();
        for (o, i) in out.blocks().iter().zip(q.blocks()) {
            prop_assert_eq!(popcount(o), popcount(i));
        }
        prop_assert_eq!(ibt_stage_invert(&out, &keys).unwrap(), q);
    }

    #[test]
    fn substitution_round_trip(img in cipher_image(4), seed in any::<u64>()) {
        let suite = SubstitutionSuite::new([sbox(seed), sbox(seed ^ 1), sbox(seed ^ 2)]);
        let mut rng = support::rng(seed);
        let n = img.len();
        let codes = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0..3u8)).collect();
        let masks = (0..n).map(|_| rand::Rng::random(&mut rng)).collect();
        let ops = OperationMatrix::with_masks(img.rows(), img.cols(), codes, masks).unwrap();
        let out = substitution_stage(&img, &ops, &suite).unwrap();
        prop_assert_eq!(substitution_stage_invert(&out, &ops, &suite).unwrap(), img);
    }

    #[test]
    fn substitution_is_pointwise(img in cipher_image(3), seed in any::<u64>(), at in any::<prop::sample::Index>()) {
        let ctx = derive_context(&KeyMaterial::random(&mut support::rng(seed)), img.rows(), img.cols()).unwrap();
        let base = substitution_stage(&img, ctx.operation_matrix(), ctx.suite()).unwrap();
        let mut changed = img.clone();
        let k = at.index(img.len());
        changed.pixels_mut()[k] ^= 0x5A;
        let out = substitution_stage(&changed, ctx.operation_matrix(), ctx.suite()).unwrap();
        for i in 0..img.len() {
            prop_assert_eq!(out.pixels()[i] == base.pixels()[i], i != k);
        }
    }

    #[test]
    fn analysis_invariants(img in cipher_image(8)) {
        let h = entropy(&img).unwrap();
        prop_assert!((0.0..=8.0).contains(&h));

        // entropy and chi-square ignore pixel positions
        let as_block = Block::new(img.rows(), img.cols(), img.pixels().to_vec()).unwrap();
        let moved = GrayImage::new(img.rows(), img.cols(), xcross_permute(&as_block).unwrap().into_pixels()).unwrap();
        prop_assert_eq!(entropy(&moved).unwrap(), h);
        prop_assert_eq!(histogram_chi_square(&moved).unwrap(), histogram_chi_square(&img).unwrap());
    }

    #[test]
    fn glcm_invariants(img in any_image(24)) {
        prop_assume!(img.cols() >= 2);
        let g = Glcm::from_image(&img).unwrap();
        let mut total = 0.0;
        for i in 0..=255u8 {
            for j in 0..=255u8 {
                total += g.prob(i, j);
            }
        }
        prop_assert!((total - 1.0).abs() <= 1e-12, "sum {}", total);
        let f = g.features();
        prop_assert!(f.energy > 0.0 && f.energy <= 1.0 + 1e-15);
        prop_assert!(f.homogeneity > 0.0 && f.homogeneity <= 1.0 + 1e-15);
        // only diagonal mass keeps its full weight in homogeneity
        let diagonal: f64 = (0..=255u8).map(|i| g.prob(i, i)).sum();
        prop_assert!(f.homogeneity + 1e-15 >= diagonal);
    }

    #[test]
    fn correlation_ignores_complement(img in any_image(24)) {
        let inverted = GrayImage::from_fn(img.rows(), img.cols(), |r, c| 255 - img.get(r, c));
        for dir in Direction::ALL {
            if let (Ok(a), Ok(b)) = (adjacent_correlation(&img, dir), adjacent_correlation(&inverted, dir)) {
                prop_assert_eq!(a.degenerate, b.degenerate);
                prop_assert!((a.value - b.value).abs() <= 1e-9, "{:?}: {} vs {}", dir, a.value, b.value);
            }
        }
    }

    #[test]
    fn pgm_round_trip(img in any_image(40), note in proptest::option::of((1usize..5000, 1usize..5000))) {
        let note = note.map(|(width, height)| PadNote { width, height });
        let bytes = write_pgm(&img, note);
        prop_assert_eq!(&write_pgm(&img, note), &bytes);
        let (header, back) = xcross::image_io::read_pgm_with_header(&bytes).unwrap();
        prop_assert_eq!(header.pad_note(), note);
        prop_assert_eq!(&back, &img);
        prop_assert_eq!(read_pgm(&bytes).unwrap(), img);
    }

    #[test]
    fn key_file_round_trip(k in key()) {
        prop_assert_eq!(KeyMaterial::from_key_file(&k.to_key_file()).unwrap(), k);
    }
}

#[test]
fn energy_can_exceed_homogeneity() {
    // all co-occurrence mass sits far off the diagonal
    let img = GrayImage::new(1, 2, vec![0, 255]).unwrap();
    let f = Glcm::from_image(&img).unwrap().features();
    assert_eq!(f.energy, 0.5);
    assert_eq!(f.homogeneity, 1.0 / 256.0);
    assert!(f.energy > f.homogeneity);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cipher_round_trip(img in cipher_image(8), k in key()) {
        let ct = xcross::encrypt(&img, &k).unwrap();
        prop_assert_eq!((ct.rows(), ct.cols()), (img.rows(), img.cols()));
        prop_assert_eq!(xcross::decrypt(&ct, &k).unwrap(), img);
    }

    #[test]
    fn derived_keys_are_inverse_pairs(k in key(), qr in 1usize..5, qc in 1usize..5) {
        let ctx = derive_context(&k, 4 * qr, 4 * qc).unwrap();
        let [k1, k2, k3, k4] = ctx.extraction_keys();
        for (fwd, inv) in [(k1, k3), (k2, k4)] {
            for (i, &j) in fwd.perm().iter().enumerate() {
                prop_assert_eq!(inv.perm()[j as usize] as usize, i);
            }
        }
    }
}
