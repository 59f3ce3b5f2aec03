import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from logcleanse.policy import load_policy  # noqa: E402
from logcleanse.variables import load_patterns  # noqa: E402

E1 = "Accepted publickey for Siavash from 4.3.2.1"

TABLE6_LINES = [
    "1454284800 (siavash) cmd (/home/siavash/config.sh > output.stat)",
    "1454284801 pam_unix(sshd:session): session closed for siavash",
    "1454284802 disabling lock debugging due to kernel taint",
    "1454284803 ACPI: LAPIC (acpi_id[0x55] lapic_id[0xff] disabled)",
]


@pytest.fixture(scope="session")
def classes():
    return load_patterns("extended")


@pytest.fixture(scope="session")
def table1_classes():
    return load_patterns("table1")


@pytest.fixture(scope="session")
def table2():
    return load_policy("paper-table2")


@pytest.fixture(scope="session")
def table6():
    return load_policy("paper-table6")
