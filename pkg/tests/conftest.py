import sys
from pathlib import Path

from hypothesis import settings

# hypothesis: some properties call quadrature oracles; disable deadlines
settings.register_profile("wavedfs", deadline=None, max_examples=50)
settings.load_profile("wavedfs")

sys.path.insert(0, str(Path(__file__).parent))
