# number -> (passed, title, detail); filled by test_acceptance, printed by conftest
RESULTS: dict[int, tuple[bool, str, str]] = {}
