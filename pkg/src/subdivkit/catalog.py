"""Built-in schemes: seven dual binary schemes and their quaternary partners.

Every value is an exact rational copied from published tables.  Binary
schemes are stored by their rule weights (the ``2n`` weights of one binary
rule in increasing index order); quaternary schemes by their two distinct
rules, the other two being mirror images.
"""
from __future__ import annotations

import os
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping

from .numeric import parse_rational
from .scheme import (
    MaskFormatError,
    Stencil,
    SubdivisionScheme,
    dual_binary_mask,
    load_mask,
    mask_from_stencils,
)

CATALOG_DIR_ENV = "SUBDIV_CATALOG_DIR"
BUILTIN = "built-in table"


class UnknownScheme(LookupError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown scheme {name!r}")
        self.name = name


class CatalogError(ValueError):
    """An extra catalog directory could not be merged."""


# name -> (index of the first weight, weights)
_BINARY_WEIGHTS: dict[str, tuple[int, tuple[str, ...]]] = {
    "binary-chaikin-2pt": (
        0,
        (
            "1/4", "3/4",
        ),
    ),
    "binary-siddiqi-4pt": (
        -2,
        (
            "1/384", "121/384", "235/384", "27/384",
        ),
    ),
    "binary-siddiqi-6pt": (
        -4,
        (
            "1/122880", "3119/122880", "6719/20480", "31927/61440", "15349/122880",
            "81/40960",
        ),
    ),
    "binary-siddiqi-8pt": (
        -6,
        (
            "1/82575360", "26039/27525120", "1385999/27525120", "26672209/82575360",
            "4210971/9175040", "1440007/9175040", "806047/82575360", "243/9175040",
        ),
    ),
    "binary-binomial-10pt": (
        -8,
        (
            "12155/33554432", "-138567/33554432", "188955/8388608", "-692835/8388608",
            "4849845/16777216", "14549535/16777216", "-969969/8388608",
            "230945/8388608", "-159885/33554432", "13585/33554432",
        ),
    ),
    "binary-siddiqi-10pt": (
        -8,
        (
            "1/95126814720", "390623/19025362944", "13138903/3397386240",
            "1704546247/23781703680", "14871214991/47563407360",
            "19761725357/47563407360", "833871641/4756340736", "488824339/23781703680",
            "40156777/95126814720", "243/1174405120",
        ),
    ),
    "binary-siddiqi-12pt": (
        -10,
        (
            "1/167423193907200", "48828113/167423193907200", "410601629/2232309252096",
            "52548530917/6200859033600", "2471063221063/27903865651200",
            "1680588922139/5580773130240", "2134020225233/5580773130240",
            "69086299223/372051542016", "1785493468247/55807731302400",
            "261595441397/167423193907200", "1975200979/167423193907200",
            "2187/2066953011200",
        ),
    ),
}

# name -> (first offset of the phase -2 rule, its weights,
#          first offset of the phase 0 rule, its weights)
_QUATERNARY_RULES: dict[str, tuple[int, tuple[str, ...], int, tuple[str, ...]]] = {
    "quat-chaikin-derived": (
        -1,
        (
            "3/16", "3/4", "1/16",
        ),
        0,
        (
            "5/8", "3/8",
        ),
    ),
    "quat-5pt": (
        -2,
        (
            "241/36864", "1189/4608", "1209/2048", "83/576", "37/36864",
        ),
        -2,
        (
            "3/16384", "9733/147456", "38119/73728", "3213/8192", "3623/147456",
            "1/147456",
        ),
    ),
    "quat-8pt": (
        -4,
        (
            "27/1677721600", "2275789/7549747200", "9086963/301989888",
            "699721619/2516582400", "369990379/754974720", "1426235351/7549747200",
            "31530847/2516582400", "16027/301989888", "1/15099494400",
        ),
        -3,
        (
            "37199/7549747200", "33580087/7549747200", "290148073/2516582400",
            "674031991/1509949440", "558397097/1509949440", "157912247/2516582400",
            "9801833/7549747200", "1681/7549747200",
        ),
    ),
    "quat-11pt": (
        -5,
        (
            "698627/852336259891200", "3879598117/284112086630400",
            "350941180003/142056043315200", "36602385889/676457349120",
            "5641800724981/20293720473600", "247891317863/579820584960",
            "527402518309/2536715059200", "2067049873661/71028021657600",
            "48690122269/56822417326080", "1902910423/852336259891200",
            "239/20293720473600",
        ),
        -5,
        (
            "27/84181359001600", "30898837/108233175859200",
            "1754117761421/6818690079129600", "32344488846199/2272896693043200",
            "163622535291293/1136448346521600", "12926815750607/32469952757760",
            "56015931444329/162349763788800", "104604880235159/1136448346521600",
            "75466139809/12025908428800", "148716800989/2272896693043200",
            "58359331/2272896693043200", "1/6818690079129600",
        ),
    ),
    "quat-14pt-binomial": (
        -7,
        (
            "165125675/1125899906842624", "896759435/140737488355328",
            "208816685055/1125899906842624", "-350111003385/140737488355328",
            "15443267900775/1125899906842624", "-845664470365/17592186044416",
            "165267038051115/1125899906842624", "66176709385215/70368744177664",
            "-67374962898815/1125899906842624", "1418419563275/140737488355328",
            "-772276338691/1125899906842624", "-17904682965/140737488355328",
            "6861145005/1125899906842624", "351267345/70368744177664",
            "147744025/1125899906842624",
        ),
        -6,
        (
            "-879424975/562949953421312", "-7313797205/562949953421312",
            "198710020223/281474976710656", "-1928438555615/281474976710656",
            "20280883755275/562949953421312", "-78511743180975/562949953421312",
            "105752643189765/140737488355328", "63006444414771/140737488355328",
            "-64970510830665/562949953421312", "17600920061725/562949953421312",
            "-1671012940025/281474976710656", "163784577385/281474976710656",
            "-3080205843/562949953421312", "-759578105/562949953421312",
        ),
    ),
    "quat-14pt": (
        -7,
        (
            "3/1379227385882214400", "103850537699/1131138859846651084800",
            "384468662194361/603274058584880578560",
            "193184601091081183/1131138859846651084800",
            "62359154801651076991/9049110878773208678400",
            "10438071559376400791/141392357480831385600",
            "116970620124289395991/430910041846343270400",
            "137915687699480465/359091701538619392",
            "648462053977087642339/3016370292924402892800",
            "17125519634472990817/377046286615550361600",
            "28434156344565775493/9049110878773208678400",
            "19659422070653153/377046286615550361600",
            "186238665573617/1809822175754641735680", "346544687/80795632846189363200",
            "1/9049110878773208678400",
        ),
        -6,
        (
            "213788633/4524555439386604339200", "8408857474501/646365062769514905600",
            "646332081504007/46168933054965350400",
            "989843345911370179/754092573231100723200",
            "23601083531203039271/904911087877320867840",
            "241716880028225596243/1508185146462201446400",
            "136704671280724852463/377046286615550361600",
            "40597867969395053203/125682095538516787200",
            "24196254751816504787/215455020923171635200",
            "1800718087517760407/129273012553902981120",
            "1128217272575781919/2262277719693302169600",
            "7348484779529681/2262277719693302169600",
            "1843780220327/1508185146462201446400", "986399/4524555439386604339200",
        ),
    ),
    "quat-17pt": (
        -8,
        (
            "170185003/143012887031060669399040000",
            "11618623511827/2275205020948692467712000",
            "2639470801758827761/87595393306524660006912000",
            "268509519026918532793/25027255230435617144832000",
            "16029066874929664797821/23358771548406576001843200",
            "11208054761546257498631183/875953933065246600069120000",
            "32207048328244229783317/361964435150928347136000",
            "4187024370524574208415201/15926435146640847273984000",
            "678810440255672301860419/1930476987471617851392000",
            "689073490261723216665251/3185287029328169454796800",
            "338960562772283782004933/5688012552371731169280000",
            "1191634131193759734219757/175190786613049320013824000",
            "8792959297188237328469/31852870293281694547968000",
            "19346249685396093203/6488547652335160000512000",
            "1048707451741153/218988483266311650017280",
            "245027153519101/875953933065246600069120000",
            "2450263/1401526292904394560110592000",
        ),
        -8,
        (
            "27/4272294750508747325440000",
            "358812277001921/28030525858087891202211840000",
            "2203625183357673913/3503815732260986400276480000",
            "103411470339072618307/140152629290439456011059200",
            "637615639085108558009/6229005746241753600491520",
            "23767610644231508920682471/7007631464521972800552960000",
            "132394698240692877731080079/3503815732260986400276480000",
            "7705315847678086375114273/45504100418973849354240000",
            "17075025982837018547243819/50964592469250711276748800",
            "1033280151597605241630239/3397639497950047418449920",
            "40126522029222497908818157/318528702932816945479680000",
            "79334867894972096989478381/3503815732260986400276480000",
            "11078992716719243713520413/7007631464521972800552960000",
            "3248016674151168146933/93435086193626304007372800",
            "4496423852919659533/28030525858087891202211840",
            "231433236694503691/3503815732260986400276480000",
            "8680597683899/28030525858087891202211840000",
            "1/28030525858087891202211840000",
        ),
    ),
}

PAIRS: Mapping[str, str] = MappingProxyType(
    {
        "binary-chaikin-2pt": "quat-chaikin-derived",
        "binary-siddiqi-4pt": "quat-5pt",
        "binary-siddiqi-6pt": "quat-8pt",
        "binary-siddiqi-8pt": "quat-11pt",
        "binary-binomial-10pt": "quat-14pt-binomial",
        "binary-siddiqi-10pt": "quat-14pt",
        "binary-siddiqi-12pt": "quat-17pt",
    }
)


def _binary(name: str) -> SubdivisionScheme:
    first, weights = _BINARY_WEIGHTS[name]
    values = [parse_rational(w) for w in weights]
    mask = dual_binary_mask(values)
    assert first == 2 - len(values), name
    return SubdivisionScheme(mask, name, BUILTIN)


def _quaternary(name: str) -> SubdivisionScheme:
    left_first, left, centre_first, centre = _QUATERNARY_RULES[name]
    a = tuple(parse_rational(w) for w in left)
    b = tuple(parse_rational(w) for w in centre)
    rules = [
        Stencil(-2, tuple(range(left_first, left_first + len(a))), a),
        Stencil(-1, tuple(range(left_first, left_first + len(a))), a[::-1]),
        Stencil(0, tuple(range(centre_first, centre_first + len(b))), b),
        Stencil(1, tuple(range(centre_first, centre_first + len(b))), b[::-1]),
    ]
    return SubdivisionScheme(mask_from_stencils(4, rules), name, BUILTIN)


def builtin_schemes() -> dict[str, SubdivisionScheme]:
    out = {}
    for binary, quaternary in PAIRS.items():
        out[binary] = _binary(binary)
        out[quaternary] = _quaternary(quaternary)
    return out


class Catalog(Mapping[str, SubdivisionScheme]):
    """Read-only name -> scheme map."""

    def __init__(self, entries: Mapping[str, SubdivisionScheme]) -> None:
        self._entries = MappingProxyType(dict(entries))

    def __getitem__(self, name: str) -> SubdivisionScheme:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownScheme(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def get_scheme(self, name: str) -> SubdivisionScheme:
        return self[name]


def load_catalog(extra_dir: str | Path | None = None) -> Catalog:
    """Built-in schemes plus every ``*.json`` mask found in ``extra_dir``.

    A file whose scheme name is already taken is rejected with CatalogError.
    """
    entries = builtin_schemes()
    if extra_dir is not None:
        directory = Path(extra_dir)
        if not directory.is_dir():
            raise CatalogError(f"catalog directory {directory} does not exist")
        for path in sorted(directory.glob("*.json")):
            try:
                scheme = load_mask(path)
            except (OSError, MaskFormatError) as exc:
                raise CatalogError(f"{path}: {exc}") from exc
            if scheme.name in entries:
                raise CatalogError(f"{path}: duplicate scheme name {scheme.name!r}")
            entries[scheme.name] = scheme
    return Catalog(entries)


_default: Catalog | None = None


def default_catalog() -> Catalog:
    """The process-wide catalog, honouring the extra-directory environment variable."""
    global _default
    if _default is None:
        _default = load_catalog(os.environ.get(CATALOG_DIR_ENV) or None)
    return _default


def catalog_get(name: str, catalog: Catalog | None = None) -> SubdivisionScheme:
    return (catalog if catalog is not None else default_catalog())[name]
