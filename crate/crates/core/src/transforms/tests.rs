use super::*;

fn random_image(rng: &mut RngStream, w: u32, h: u32) -> ImageBuffer {
    let raw: Vec<u8> = (0..w * h * 3).map(|_| rng.below(256) as u8).collect();
    ImageBuffer::from_raw(w, h, &raw).unwrap()
}

fn cfg() -> AugmentConfig {
    AugmentConfig::default()
}

#[test]
fn ggt_never_fires_at_zero() {
    let mut rng = RngStream::new(1);
    let img = random_image(&mut rng, 6, 4);
    let c = AugmentConfig { p: 0.0, ..cfg() };
    for _ in 0..200 {
        let out = ggt(&img, &c, &mut rng);
        assert!(!out.applied);
        assert_eq!(out.kind, TransformKind::None);
        assert_eq!(out.image, img);
    }
}

#[test]
fn ggt_always_fires_at_one() {
    let mut rng = RngStream::new(2);
    let c = AugmentConfig { p: 1.0, ..cfg() };
    for _ in 0..50 {
        let img = random_image(&mut rng, 5, 5);
        let out = ggt(&img, &c, &mut rng);
        assert!(out.applied);
        assert_eq!(out.kind, TransformKind::Global);
        assert!(out.region.is_none());
        assert_eq!(out.image, to_grayscale(&img));
    }
}

#[test]
fn ggt_sketch_mode_uses_sketch() {
    let mut rng = RngStream::new(3);
    let img = random_image(&mut rng, 8, 8);
    let c = AugmentConfig { p: 1.0, mode: ColorMode::Sketch, ..cfg() };
    assert_eq!(ggt(&img, &c, &mut rng).image, to_sketch(&img));
}

#[test]
fn ggt_firing_rate_at_default() {
    let img = ImageBuffer::filled(2, 2, [10, 20, 30]).unwrap();
    let c = cfg();
    let mut rng = RngStream::new(123);
    let n = 100_000;
    let fired = (0..n).filter(|_| ggt(&img, &c, &mut rng).applied).count();
    let frac = fired as f64 / n as f64;
    assert!((0.045..=0.055).contains(&frac), "{frac}");
}

#[test]
fn rect_on_256_square_respects_area_bounds() {
    let c = cfg();
    let mut rng = RngStream::new(1);
    let r = sample_rect(256, 256, &c, &mut rng).expect("defaults fit easily");
    assert!(r.fits(256, 256));
    // +-2 pixels of slack on each side
    let lo = ((r.w.saturating_sub(2)) * (r.h.saturating_sub(2))) as f64 / 65536.0;
    let hi = ((r.w + 2) * (r.h + 2)) as f64 / 65536.0;
    assert!(lo <= c.s_h && hi >= c.s_l, "{r:?}");
}

#[test]
fn nearly_full_rects_rarely_fit_a_tiny_image() {
    let c = AugmentConfig { s_l: 0.9, s_h: 0.9, ..cfg() };
    let mut rng = RngStream::new(5);
    let misses = (0..1000)
        .filter(|_| {
            let c = AugmentConfig { retry_cap: 1, ..c.clone() };
            sample_rect(4, 4, &c, &mut rng).is_none()
        })
        .count();
    assert!(misses > 500, "{misses}");
}

#[test]
fn exhausted_sampler_leaves_image_alone() {
    // very wide rectangles never fit a 2-pixel-wide strip
    let c = AugmentConfig { p_r: 1.0, s_l: 0.95, s_h: 0.95, r_1: 0.01, r_2: 0.01, retry_cap: 3, ..cfg() };
    let mut rng = RngStream::new(8);
    let img = random_image(&mut rng, 2, 50);
    let out = lgt(&img, &c, &mut rng);
    assert!(!out.applied);
    assert!(out.region.is_none());
    assert_eq!(out.image, img);
}

#[test]
fn rect_aspect_ratio_stays_in_range() {
    // side rounding moves h/w by up to r * (0.5/w + 0.5/h); at 512x512 the
    // smallest rectangles are wide enough for that to stay under 0.05
    let c = cfg();
    let mut rng = RngStream::new(77);
    let mut accepted = 0;
    while accepted < 20_000 {
        if let Some(r) = sample_rect(512, 512, &c, &mut rng) {
            accepted += 1;
            let ratio = r.h as f64 / r.w as f64;
            assert!(ratio >= c.r_1 - 0.05 && ratio <= c.r_2 + 0.05, "{r:?}");
        }
    }
}

#[test]
fn lgt_identity_when_disabled() {
    let mut rng = RngStream::new(4);
    let img = random_image(&mut rng, 10, 10);
    let c = AugmentConfig { p_r: 0.0, ..cfg() };
    for _ in 0..100 {
        assert_eq!(lgt(&img, &c, &mut rng), TransformOutcome::unchanged(&img));
    }
}

#[test]
fn lgt_forced_changes_only_the_region() {
    let mut rng = RngStream::new(6);
    let c = AugmentConfig { p_r: 1.0, ..cfg() };
    for _ in 0..100 {
        let img = random_image(&mut rng, 24, 16);
        let out = lgt(&img, &c, &mut rng);
        let r = out.region.expect("fires");
        assert_eq!(out.kind, TransformKind::Local);
        assert!(r.fits(24, 16));
        for y in 0..16 {
            for x in 0..24 {
                let px = out.image.get(x, y);
                if r.contains(x, y) {
                    assert_eq!(px, color::gray_pixel(img.get(x, y)));
                } else {
                    assert_eq!(px, img.get(x, y));
                }
            }
        }
    }
}

#[test]
fn local_sketch_copies_from_the_full_sketch() {
    let mut rng = RngStream::new(7);
    let c = AugmentConfig { p_r: 1.0, mode: ColorMode::Sketch, ..cfg() };
    let img = random_image(&mut rng, 20, 20);
    let out = lgt(&img, &c, &mut rng);
    let r = out.region.unwrap();
    let sketch = to_sketch(&img);
    for y in 0..20 {
        for x in 0..20 {
            let want = if r.contains(x, y) { sketch.get(x, y) } else { img.get(x, y) };
            assert_eq!(out.image.get(x, y), want);
        }
    }
}

#[test]
fn rcd_forced_global_is_fully_gray() {
    let mut rng = RngStream::new(9);
    for p_r in [0.0, 0.4, 1.0] {
        let c = AugmentConfig { p: 1.0, p_r, ..cfg() };
        let img = random_image(&mut rng, 9, 9);
        let out = rcd(&img, &c, &mut rng);
        assert_eq!(out.kind, TransformKind::Global);
        assert!(out.image.is_gray());
    }
}

#[test]
fn rcd_without_global_equals_lgt() {
    let c = AugmentConfig { p: 0.0, p_r: 1.0, ..cfg() };
    let mut src = RngStream::new(10);
    for i in 0..50 {
        let img = random_image(&mut src, 12, 18);
        let mut a = RngStream::with_stream(99, i);
        let mut b = RngStream::with_stream(99, i);
        assert_eq!(rcd(&img, &c, &mut a), lgt(&img, &c, &mut b));
    }
}

#[test]
fn rcd_combined_rate() {
    // 0.05 + 0.95 * 0.4
    let img = ImageBuffer::filled(32, 64, [200, 10, 10]).unwrap();
    let c = cfg();
    let n = 100_000;
    let fired = (0..n)
        .filter(|&i| rcd(&img, &c, &mut RngStream::with_stream(1, i)).applied)
        .count();
    let frac = fired as f64 / n as f64;
    assert!((frac - 0.43).abs() <= 0.01, "{frac}");
}

#[test]
fn chained_can_report_both() {
    let c = AugmentConfig { p: 1.0, p_r: 1.0, combine: false, ..cfg() };
    let mut rng = RngStream::new(12);
    let img = random_image(&mut rng, 16, 16);
    let out = augment(&img, &c, &mut rng);
    assert_eq!(out.kind, TransformKind::GlobalLocal);
    assert!(out.region.is_some());
    assert_eq!(out.image, to_grayscale(&img));
}

#[test]
fn batch_decision_overrides_global_draw() {
    let mut rng = RngStream::new(13);
    let img = random_image(&mut rng, 8, 8);
    let c = AugmentConfig { p: 0.0, p_r: 0.0, ..cfg() };
    let out = augment_in_batch(&img, &c, &mut rng, true);
    assert_eq!(out.kind, TransformKind::Global);
    let out = augment_in_batch(&img, &c, &mut rng, false);
    assert!(!out.applied);
}

#[test]
fn transforms_are_deterministic_and_keep_dimensions() {
    let mut src = RngStream::new(14);
    let c = AugmentConfig { p: 0.3, p_r: 0.6, ..cfg() };
    for i in 0..100 {
        let img = random_image(&mut src, 1 + i as u32 % 13, 1 + i as u32 % 7);
        let a = augment(&img, &c, &mut RngStream::with_stream(5, i));
        let b = augment(&img, &c, &mut RngStream::with_stream(5, i));
        assert_eq!(a, b);
        assert_eq!(a.image.dimensions(), img.dimensions());
        if !a.applied {
            assert_eq!(a.image, img);
        }
        assert_eq!(a.region.is_some(), a.kind.includes_local());
    }
}
