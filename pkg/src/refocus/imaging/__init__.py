# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .raster import (Color, Region, Raster, WHITE, RED, load_png, save_png,
                     read_png, write_png, fill_opaque, composite_overlay,
                     composite_overlay_many, draw_rect_outline,
                     restore_regions, union_all)
