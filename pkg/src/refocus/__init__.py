# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Visual editing chain-of-thought over tables and charts."""

__version__ = "0.1.0"
