from hypothesis import HealthCheck, settings

# first calls pay numba compilation, so per-example deadlines are meaningless
settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")
