# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import numpy as np
import pytest
from PIL import Image
from io import BytesIO

from refocus.errors import DecodeError, EmptyRegion
from refocus.imaging.raster import (Color, Raster, Region, WHITE, composite_overlay,
                                    composite_overlay_many, draw_rect_outline,
                                    fill_opaque, load_png, restore_regions,
                                    save_png, union_all)


def _scalar_over(dst, color):
    a = color.a
    dst = [int(v) for v in dst]
    rgb = [(2 * (s * a + d * (255 - a)) + 255) // 510
           for s, d in zip((color.r, color.g, color.b), dst[:3])]
    alpha = (2 * (255 * a + dst[3] * (255 - a)) + 255) // 510
    return tuple(rgb) + (alpha,)


def _random_raster(rng, width, height):
    return Raster.from_array(rng.randint(0, 256, size=(height, width, 4)).astype(np.uint8))


def test_highlight_over_white_is_light_red():
    out = composite_overlay(Raster.blank(4, 4), Region(0, 0, 3, 3), Color(255, 0, 0, 50))
    assert out.pixel(2, 2) == (255, 205, 205, 255)


def test_composite_matches_scalar_oracle():
    rng = np.random.RandomState(7)
    for _ in range(1000):
        w, h = rng.randint(1, 9, size=2)
        raster = _random_raster(rng, w, h)
        x1, x2 = sorted(rng.randint(0, w, size=2))
        y1, y2 = sorted(rng.randint(0, h, size=2))
        color = Color(*[int(v) for v in rng.randint(0, 256, size=4)])
        out = composite_overlay(raster, Region(x1, y1, x2, y2), color)
        src, res = raster.array(), out.array()
        for y in range(h):
            for x in range(w):
                inside = x1 <= x <= x2 and y1 <= y <= y2
                expected = _scalar_over(src[y, x], color) if inside and color.a \
                    else tuple(src[y, x])
                assert tuple(res[y, x]) == expected


def test_overlapping_regions_are_composited_once():
    raster = Raster.blank(10, 10)
    color = Color(255, 0, 0, 50)
    out = composite_overlay_many(raster, [Region(0, 0, 5, 5), Region(3, 3, 9, 9)], color)
    assert out.pixel(4, 4) == out.pixel(0, 0) == (255, 205, 205, 255)
    assert out.pixel(9, 0) == (255, 255, 255, 255)


def test_zero_alpha_is_identity():
    rng = np.random.RandomState(1)
    raster = _random_raster(rng, 6, 5)
    out = composite_overlay(raster, Region(0, 0, 5, 4), Color(0, 0, 0, 0))
    assert out.digest() == raster.digest()


def test_operations_do_not_touch_input():
    raster = Raster.blank(8, 8)
    before = raster.digest()
    fill_opaque(raster, Region(1, 1, 3, 3), Color(0, 0, 0))
    draw_rect_outline(raster, Region(0, 0, 7, 7), Color(255, 0, 0), 2)
    composite_overlay(raster, Region(0, 0, 7, 7), Color(0, 0, 255, 100))
    assert raster.digest() == before


def test_regions_are_clamped_and_empty_ones_rejected():
    raster = Raster.blank(5, 5)
    out = fill_opaque(raster, Region(-3, -3, 1, 1), Color(0, 0, 0))
    assert out.pixel(0, 0) == (0, 0, 0, 255)
    assert out.pixel(2, 2) == (255, 255, 255, 255)
    with pytest.raises(EmptyRegion):
        fill_opaque(raster, Region(10, 10, 12, 12), Color(0, 0, 0))


def test_outline_thickness():
    out = draw_rect_outline(Raster.blank(10, 10), Region(1, 1, 8, 8), Color(255, 0, 0), 2)
    assert out.pixel(1, 1) == (255, 0, 0, 255)
    assert out.pixel(2, 5) == (255, 0, 0, 255)
    assert out.pixel(3, 5) == (255, 255, 255, 255)
    assert out.pixel(0, 0) == (255, 255, 255, 255)
    with pytest.raises(ValueError):
        draw_rect_outline(Raster.blank(3, 3), Region(0, 0, 2, 2), Color(0, 0, 0), 0)


def test_thick_outline_fills_small_region():
    out = draw_rect_outline(Raster.blank(6, 6), Region(1, 1, 3, 3), Color(0, 0, 255), 5)
    for x in range(1, 4):
        for y in range(1, 4):
            assert out.pixel(x, y) == (0, 0, 255, 255)
    assert out.pixel(4, 4) == (255, 255, 255, 255)


def test_restore_regions():
    original = Raster.blank(6, 6)
    edited = fill_opaque(original, Region(0, 0, 5, 5), Color(0, 0, 0))
    restored = restore_regions(edited, original, [Region(2, 2, 3, 3)])
    assert restored.pixel(2, 3) == (255, 255, 255, 255)
    assert restored.pixel(0, 0) == (0, 0, 0, 255)


def test_png_round_trip_keeps_digest():
    rng = np.random.RandomState(3)
    raster = _random_raster(rng, 13, 7)
    assert load_png(save_png(raster)).digest() == raster.digest()


def test_png_color_types_gain_opaque_alpha():
    buffer = BytesIO()
    Image.new("RGB", (3, 2), (10, 20, 30)).save(buffer, format="PNG")
    raster = load_png(buffer.getvalue())
    assert (raster.width, raster.height) == (3, 2)
    assert raster.pixel(1, 1) == (10, 20, 30, 255)

    buffer = BytesIO()
    Image.new("L", (2, 2), 77).save(buffer, format="PNG")
    assert load_png(buffer.getvalue()).pixel(0, 0) == (77, 77, 77, 255)


def test_bad_png_raises_decode_error():
    with pytest.raises(DecodeError):
        load_png(b"GIF89a....")
    png = save_png(Raster.blank(4, 4))
    with pytest.raises(DecodeError):
        load_png(png[:30])


def test_digest_depends_on_dimensions():
    a = Raster.blank(2, 8, WHITE)
    b = Raster.blank(8, 2, WHITE)
    assert a.pixels == b.pixels
    assert a.digest() != b.digest()


def test_region_geometry():
    a, b = Region(0, 0, 9, 9), Region(5, 5, 14, 14)
    assert a.area == 100
    assert a.intersection(b) == Region(5, 5, 9, 9)
    assert a.union(b) == Region(0, 0, 14, 14)
    assert a.iou(b) == pytest.approx(25 / 175)
    assert a.iou(Region(20, 20, 21, 21)) == 0.
    assert Region(9, 9, 0, 0).normalized() == a
    assert a.contains(Region(2, 2, 3, 3))
    assert Region.from_dict(a.to_dict()) == a
    assert Region.from_dict([1, 2, 3, 4]) == Region(1, 2, 3, 4)
    assert union_all([]) is None
    assert union_all([a, b, Region(-1, 3, 0, 4)]) == Region(-1, 0, 14, 14)


def test_color_channels_validated():
    with pytest.raises(ValueError):
        Color(256, 0, 0)
    with pytest.raises(ValueError):
        Raster(2, 2, b"\x00" * 15)
