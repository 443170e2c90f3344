"""
Families - named bivariate polynomial families, bracket notation and the
registry of tabulated limit points.

    P(a, b)      sum_{j<a} x^j + y sum_{j=a-1}^{a+b-2} x^j + y^2 sum_{j=a+b-2}^{2a+b-3} x^j
    Q(a, b)      x^s (1 + x^a + (1 + x^b) y + x^(b-a) (1 + x^a) y^2),  s = max(a-b, 0)
    R(a, b)      x^s (1 + x^a + (1 - x^b) y - x^(b-a) (1 + x^a) y^2)
    S(a, b, e)   1 + (x^a + e)(x^b + e) y + x^(a+b) y^2,  e = +-1
    T(f)         y f(x) + f*(x),  f*(x) = x^deg(f) f(1/x)
    [rows]       row i = coefficients of y^i, character j = power of x, {+,-,0}
"""

import re
from dataclasses import dataclass

from .exceptions import BadSpec
from .polycore import IntBiPoly, IntPoly, invert, parse_poly

KINDS = ('P', 'Q', 'R', 'S', 'T', 'bracket')
_SIGNS = {'+': 1, '-': -1, '0': 0}

_LABEL = re.compile(r'([PQRS])\((\d+),(\d+)(?:,([+-])(?:1)?)?\)')
_T_LABEL = re.compile(r'T\((.+)\)')
_BRACKET = re.compile(r'\[(.*)\]')


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple = ()
    f_coeffs: tuple = ()
    bracket_rows: tuple = ()
    inverted: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadSpec(f'unknown family kind {self.kind!r}')
        if self.kind in 'PQR':
            if len(self.params) != 2 or min(self.params) < 1:
                raise BadSpec(f'{self.kind} needs a, b >= 1, got {self.params}')
        elif self.kind == 'S':
            if len(self.params) != 3 or min(self.params[:2]) < 1 or self.params[2] not in (-1, 1):
                raise BadSpec(f'S needs a, b >= 1 and eps = +-1, got {self.params}')
        elif self.kind == 'T':
            f = IntPoly(self.f_coeffs)
            if f.deg < 1 or f.coeffs[0] == 0:
                raise BadSpec('T needs f of degree >= 1 with f(0) != 0')
        else:
            _check_rows(self.bracket_rows)

    @property
    def label(self):
        if self.kind == 'S':
            a, b, eps = self.params
            body = f'S({a}, {b},{"+" if eps > 0 else "-"})'
        elif self.kind == 'T':
            body = f'T({_poly_text(self.f_coeffs)})'
        elif self.kind == 'bracket':
            body = '[' + ', '.join(self.bracket_rows) + ']'
        else:
            body = f'{self.kind}({self.params[0]}, {self.params[1]})'
        return f'inv:{body}' if self.inverted else body

    def json_params(self):
        if self.kind == 'T':
            return list(self.f_coeffs)
        if self.kind == 'bracket':
            return list(self.bracket_rows)
        return list(self.params)

    def with_inversion(self, inverted=True):
        return FamilySpec(self.kind, self.params, self.f_coeffs, self.bracket_rows, inverted)


def _poly_text(coeffs):
    """f in the table's spacing, e.g. 1 + x - x^3"""
    return str(IntPoly(coeffs)).replace('+', ' + ').replace('-', ' - ').lstrip(' ')


def _check_rows(rows):
    if not rows:
        raise BadSpec('bracket needs at least one row')
    width = len(rows[0])
    for row in rows:
        if len(row) != width or not row:
            raise BadSpec(f'bracket rows differ in length: {list(rows)}')
        bad = set(row) - set(_SIGNS)
        if bad:
            raise BadSpec(f'bracket characters must be +, - or 0, got {sorted(bad)}')


# ============================================================================
# CONSTRUCTORS
# ============================================================================

def _span(lo, hi, sign=1):
    """sign * sum_{j=lo}^{hi} x^j"""
    return IntPoly([0] * lo + [sign] * (hi - lo + 1))


def _mono(j, c=1):
    return IntPoly([0] * j + [c])


def family_p(a, b):
    return IntBiPoly.from_columns([
        _span(0, a - 1),
        _span(a - 1, a + b - 2),
        _span(a + b - 2, 2 * a + b - 3),
    ])


def family_q(a, b, sign=1):
    s = max(a - b, 0)
    top = _mono(s + b - a) + _mono(s + b)
    return IntBiPoly.from_columns([
        _mono(s) + _mono(s + a),
        _mono(s) + _mono(s + b, sign),
        top.scale(sign),
    ])


def family_r(a, b):
    return family_q(a, b, sign=-1)


def family_s(a, b, eps):
    middle = (_mono(a) + _mono(0, eps)) * (_mono(b) + _mono(0, eps))
    return IntBiPoly.from_columns([IntPoly([1]), middle, _mono(a + b)])


def family_t(f_coeffs):
    f = IntPoly(f_coeffs)
    return IntBiPoly.from_columns([IntPoly(f.coeffs[::-1]), f])


def parse_bracket(rows):
    """Rows of {+,-,0}: row index = power of y, character index = power of x"""
    rows = tuple(r.strip().replace('−', '-') for r in rows)
    _check_rows(rows)
    return IntBiPoly.from_terms({
        (j, k): _SIGNS[ch] for k, row in enumerate(rows) for j, ch in enumerate(row)
    })


def make(spec):
    """The IntBiPoly named by a FamilySpec, inverted when spec.inverted"""
    if spec.kind == 'P':
        P = family_p(*spec.params)
    elif spec.kind == 'Q':
        P = family_q(*spec.params)
    elif spec.kind == 'R':
        P = family_r(*spec.params)
    elif spec.kind == 'S':
        P = family_s(*spec.params)
    elif spec.kind == 'T':
        P = family_t(spec.f_coeffs)
    else:
        P = parse_bracket(spec.bracket_rows)
    return invert(P) if spec.inverted else P


def parse_family(text):
    """
    FamilySpec from a label such as 'P(2, 3)', 'S(1, 3,+)', 'T(1 + x - x^3)',
    '[++000, +0-0+, 000++]', optionally prefixed by 'inv:'.
    """
    s = text.strip()
    inverted = s.startswith('inv:')
    if inverted:
        s = s[4:].strip()
    compact = ''.join(s.split()).replace('−', '-').replace('$', '')

    m = _LABEL.fullmatch(compact)
    if m:
        kind, a, b, eps = m.groups()
        if (kind == 'S') != (eps is not None):
            raise BadSpec(f'{kind} takes {"three" if kind == "S" else "two"} parameters: {text!r}')
        params = (int(a), int(b)) + ((1 if eps == '+' else -1,) if eps else ())
        return FamilySpec(kind, params, inverted=inverted)
    m = _T_LABEL.fullmatch(compact)
    if m:
        f = parse_poly(m.group(1))
        if f.deg_y > 0:
            raise BadSpec(f'T takes a polynomial in x only: {text!r}')
        return FamilySpec('T', f_coeffs=f.column(0).coeffs, inverted=inverted)
    m = _BRACKET.fullmatch(compact)
    if m:
        rows = tuple(r for r in m.group(1).split(','))
        return FamilySpec('bracket', bracket_rows=rows, inverted=inverted)
    raise BadSpec(f'not a family label: {text!r}')


def looks_like_family(text):
    s = text.strip()
    return s.startswith(('inv:', '[')) or bool(re.match(r'[PQRST]\s*\(', s))


# ============================================================================
# REGISTRY
# ============================================================================

@dataclass(frozen=True)
class RegistryRow:
    row_id: str
    spec: FamilySpec
    expected_M: float
    expected_LC: float
    expected_LC_inv: float
    spec_unavailable: bool = False

    def __post_init__(self):
        if self.expected_M < 1:
            raise ValueError(f'row {self.row_id}: M below 1')
        if not (0 <= self.expected_LC <= 1 and 0 <= self.expected_LC_inv <= 1):
            raise ValueError(f'row {self.row_id}: LC outside [0, 1]')

    @property
    def kind(self):
        return self.spec.kind

    def as_dict(self):
        return {
            'row_id': self.row_id,
            'kind': self.kind,
            'label': self.spec.label,
            'params': self.spec.json_params(),
            'expected_M': self.expected_M,
            'expected_LC': self.expected_LC,
            'expected_LC_inv': self.expected_LC_inv,
            'spec_unavailable': self.spec_unavailable,
        }


_TABLE = (
    ('1', 'P(2, 3)', 1.2554338662666087457, 0.1328095098966884, 0.230053456162615),
    ('2', 'P(2, 1)', 1.2857348642919862749, 0.1608612465103325, 0.333333333333333),
    ("2'", 'P(1, 3)', 1.2857348642919862749, 0.3333333333333333, 0.160861246510332),
    ('3', '[++000, +0-0+, 000++]', 1.3090983806523284595, 0.2970136797597501, 0.097583122975771),
    ('4', 'P(3, 5)', 1.3156927029866410935, 0.1646453474320021, 0.261925575993535),
    ('5', 'T(1 + x - x^3)', 1.3247179572447460260, 0.0, 0.132322561324637),
    ('6', 'P(3, 4)', 1.3253724973075860349, 0.1739784246485862, 0.288589141585482),
    ('7', 'P(2, 5)', 1.3320511054374193142, 0.2634504964561481, 0.272862064298000),
    ('8', 'S(1, 3,+)', 1.3323961294587154121, 0.3814904582918582, 0.124091876652015),
    ('9', 'P(3, 2)', 1.3381374319388410775, 0.1871346248477649, 0.345086459236550),
    ('10', 'P(4, 7)', 1.3399999217381835332, 0.1784746137157699, 0.273841185766290),
    ('11', 'P(3, 1)', 1.3405068829308471079, 0.1895159205822178, 0.368337855217854),
    ('12', 'T(1 + x^2 - x^7)', 1.3497161046696958653, 0.0, 0.130905750935710),
    ('13', 'P(3, 7)', 1.3500148321630142650, 0.2403097841316317, 0.282722388246059),
    ('14', 'S(1, 4,-)', 1.3503169790598690950, 0.3105668890134219, 0.097319162141083),
    ('15', 'P(4, 5)', 1.3511458956697046903, 0.1902698620670582, 0.311233156483764),
    ('16', 'P(5, 9)', 1.3524680625188602961, 0.1860703555283188, 0.279768767163400),
    ('17', 'Q(1, 6)', 1.3536976494626355711, 0.1893226580984896, 0.079331472814232),
    ('18', 'P(4, 3)', 1.3567481051456008311, 0.1964065801899085, 0.347838496792791),
    ('19', 'P(5, 8)', 1.3567859884526454967, 0.1908351326172760, 0.293851334230770),
    ('20', '[++00000, +0---0+, 00000++]', 1.3581296324044179208, 0.3755212901021780, 0.107925225247525),
    ('21', 'P(4, 1)', 1.3585455903960511404, 0.1981783524823832, 0.376084355688991),
    ('22', 'P(4, 9)', 1.3592080686995589268, 0.2295536290347317, 0.285604424375482),
    ('23', 'P(6, 11)', 1.3598117752819405021, 0.1908185635976727, 0.283185962099926),
    ('24', 'S(1, 6,+)', 1.3598158989877492950, 0.3638326121576760, 0.080362533690731),
    ('25', 'T(1 + x + x^8)', 1.3599141493821189216, 0.0, 0.062172551844474),
    ('26', 'P(5, 7)', 1.3602208408592842371, 0.1947758787175794, 0.307985887166100),
    ('27', 'P(5, 6)', 1.3627242816569882815, 0.1976969967166677, 0.321914094334985),
    ('28', 'S(3, 5,+)', 1.3636514981864992177, 0.3616163835316277, 0.177841235500398),
    ('29', 'T(1 - x^2 + x^5)', 1.3641995455827723418, 0.0, 0.178772346520853),
    ('30', '[+000, 00++, ++00, 000+]', 1.3644358117806362770, 0.3504700257823537, 0.169413093518251),
    ('31', 'P(7, 13)', 1.3645459857899151366, 0.1940425569464528, 0.285345672159789),
    ('32', 'P(5, 11)', 1.3646557293930641449, 0.2236027778291241, 0.286902784448591),
    ('33', 'S(2, 7,-)', 1.3650623157174417179, 0.3360946113639976, 0.115525164633522),
    ('34', 'P(5, 4)', 1.3654687370557201592, 0.2007692138817449, 0.348374180979957),
    ('35', '[++000, ++0-0, 00000, 0-0++, 000++]', 1.3659850533667936783, 0.2069305454044983, 0.206930545404498),
    ('36', 'P(5, 3)', 1.3661459663116649518, 0.2014521139875612, 0.359293353026221),
    ('37', 'P(5, 2)', 1.3665709746056369455, 0.2018615118309531, 0.371006144584871),
    ('38', 'P(5, 1)', 1.3668078899273126149, 0.2020844014923849, 0.378452305048962),
    ('39', 'R(1, 5)', 1.3668830708592258921, 0.1417550822341309, 0.126211051843860),
    ('40', 'P(7, 12)', 1.3669909125179202255, 0.1970232013102869, 0.294801531511566),
    ('41', 'P(8, 15)', 1.3677988580117157740, 0.1963614081210482, 0.286799704864039),
    ('42', 'T(1 + x^4 + x^11)', 1.3678546316653002345, 0.0, 0.172252351901681),
    ('43', 'P(6, 13)', 1.3681962517212729703, 0.2199360577499605, 0.287642585167356),
    ('44', 'P(1, 9)', 1.3682140096679950123, 0.2082012946810569, 0.066657322721448),
    ('45', '[++00000, ++0-0++, 00000++]', 1.3683434385467330804, 0.3045732337814742, 0.213131613170404),
    ('46', 'P(6, 7)', 1.3687474425069274154, 0.2014928273535877, 0.327637984546821),
    ('47', 'P(7, 11)', 1.3689491694959833864, 0.1994880038265199, 0.304157343580054),
    ('48', 'S(1, 9,+)', 1.3697823199880122791, 0.3622499773114010, 0.059018757923146),
)

_REGISTRY = tuple(
    RegistryRow(row_id, parse_family(label), m, lc, lc_inv)
    for row_id, label, m, lc, lc_inv in _TABLE
)


def registry():
    return _REGISTRY


def registry_row(row_id):
    for row in _REGISTRY:
        if row.row_id == row_id:
            return row
    raise KeyError(f'no registry row {row_id!r}')


def registry_json():
    """Rows as plain dicts, ready for serialization"""
    return [row.as_dict() for row in _REGISTRY]


def row_sort_key(row_id):
    """'2' < "2'" < '3' < ... < '48'"""
    base = row_id.rstrip("'")
    return int(base), len(row_id) - len(base)
