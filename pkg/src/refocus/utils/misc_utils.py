# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import logging
import sys
from functools import partial

from tqdm import tqdm as original_tqdm

# progress goes to stderr; stdout is reserved for payloads
tqdm = partial(original_tqdm, dynamic_ncols=True, file=sys.stderr)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(verbose=False):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format=LOG_FORMAT, stream=sys.stderr, force=True)


def git_sha(path="."):
    """Commit of the repository containing `path`, or None outside one."""
    try:
        import git
        repo = git.Repo(path, search_parent_directories=True)
        return repo.head.commit.hexsha
    except Exception:  # not a repository, no git binary, detached empty repo
        return None
