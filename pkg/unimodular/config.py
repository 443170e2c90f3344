"""
MethodConfig - tolerances and resolutions shared by every method.
"""

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class MethodConfig:
    """Immutable numerical configuration, safe to share across threads"""
    root_tol: float = 1e-12
    max_iter: int = 200
    tau: float = 1e-9
    quad_points: int = 4096
    quad_tol: float = 1e-4
    mahler_grid: int = 512
    cap_r: float = 0.99999
    cap_n: int = 300
    cap_points: int = 16384
    bisect_tol: float = 1e-12
    grid_n: int = 256
    degenerate_floor: float = 1e-12
    tau_exact: float = 1e-10
    disc_budget: float = 1e7

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f'{f.name} must be positive')
        if not self.cap_r < 1:
            raise ValueError('cap_r must be < 1')
        if not self.tau < 0.5:
            raise ValueError('tau must be < 0.5')

    @classmethod
    def from_settings(cls, **overrides):
        """Defaults from settings.UNIMODAL, then non-None overrides"""
        from django.conf import settings

        values = {}
        configured = getattr(settings, 'UNIMODAL', {}) if settings.configured else {}
        for f in fields(cls):
            key = f.name.upper()
            if key in configured:
                values[f.name] = f.type(configured[key])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)
