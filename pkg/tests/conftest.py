import os
import tempfile

from hypothesis import HealthCheck, settings

# app.py opens its journal at import time
os.environ.setdefault("HYPERSEQ_DB", os.path.join(tempfile.mkdtemp(prefix="hyperseq-"), "results.db"))

settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=5, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))
