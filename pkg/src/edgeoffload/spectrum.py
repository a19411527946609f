"""Registry of spectrum set aside for public-safety broadband, by ITU region."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .model import ValidationError

CONTIGUOUS = "contiguous"
NON_CONTIGUOUS = "non-contiguous"
UNSPECIFIED = "unspecified"

SANITY_WINDOW_MHZ = (20.0, 6000.0)
WRC15_RANGE_MHZ = (694.0, 894.0)


class AllocationNotFound(LookupError):
    """No registry entry matches a region or country selector."""


@dataclass(frozen=True)
class SpectrumAllocation:
    itu_region: int
    area: str
    band_label: str
    printed_band: str  # frequency column exactly as published
    ranges_mhz: Tuple[Tuple[float, float], ...]
    bandwidth_mhz: Optional[float]  # None when no dedicated band exists
    components_mhz: Tuple[float, ...] = ()  # "x + y" split, when printed
    contiguity: str = UNSPECIFIED
    note: str = ""
    bandwidth_max_mhz: Optional[float] = None  # upper bound for ranged entries

    @property
    def has_ranges(self) -> bool:
        return bool(self.ranges_mhz)

    def overlaps(self, low: float, high: float) -> bool:
        return any(lo < high and hi > low for lo, hi in self.ranges_mhz)

    def validate(self) -> None:
        lo_ok, hi_ok = SANITY_WINDOW_MHZ
        if self.itu_region not in (1, 2, 3):
            raise ValidationError(f"{self.area}: bad ITU region {self.itu_region}")
        for lo, hi in self.ranges_mhz:
            if not lo < hi:
                raise ValidationError(f"{self.area} {self.printed_band}: range {lo}-{hi}")
            if lo < lo_ok or hi > hi_ok:
                raise ValidationError(f"{self.area} {self.printed_band}: outside sanity window")
        if self.components_mhz:
            if not math.isclose(sum(self.components_mhz), self.bandwidth_mhz):
                raise ValidationError(f"{self.area} {self.printed_band}: components do not sum")
            if len(self.ranges_mhz) == len(self.components_mhz):
                for (lo, hi), part in zip(self.ranges_mhz, self.components_mhz):
                    width = hi - lo
                    # non-contiguous rows carry the envelope, so it may exceed the blocks
                    ok = (width >= part if self.contiguity == NON_CONTIGUOUS
                          else math.isclose(width, part))
                    if not ok:
                        raise ValidationError(
                            f"{self.area} {self.printed_band}: range width {width} "
                            f"does not match component {part}")


def _row(region, area, label, printed, ranges, bandwidth, components=(),
         contiguity=UNSPECIFIED, note="", bandwidth_max=None):
    return SpectrumAllocation(region, area, label, printed, tuple(ranges), bandwidth,
                              tuple(components), contiguity, note, bandwidth_max)


_TABLE = (
    _row(1, "Europe", "400 MHz", "410-430/450-470 MHz",
         [(410, 430), (450, 470)], 40, (20, 20)),
    _row(1, "Europe", "700 MHz", "733/758-788 MHz",
         [(758, 788)], 60, (30, 30),
         note="Printed as 733/758-788 MHz with 60 (30 + 30) MHz; the lower block's "
              "start edge is not printed, so only 758-788 MHz is stored and the printed "
              "edges span less than the stated total"),
    _row(1, "UK", "none", "No dedicated band", [], None,
         note="Uses commercial LTE bands"),
    _row(2, "Americas", "VHF Lower Band", "25-50 MHz", [(25, 50)], 6.3),
    _row(2, "Americas", "VHF Upper Band", "150-174 MHz", [(150, 174)], 3.6,
         contiguity=NON_CONTIGUOUS),
    _row(2, "Americas", "220 MHz band", "220-222", [(220, 222)], 0.1),
    _row(2, "Americas", "UHF Band", "450-470", [(450, 470)], 3.7,
         contiguity=NON_CONTIGUOUS),
    _row(2, "Americas", "T-Band", "470-512 MHz", [(470, 512)], 6,
         contiguity=CONTIGUOUS, bandwidth_max=12,
         note="6 to 12 MHz blocks (contiguous in specified markets)"),
    _row(2, "Americas", "700 MHz", "758-769/788-799 MHz",
         [(758, 769), (788, 799)], 22, (11, 11), CONTIGUOUS),
    _row(2, "Americas", "700 MHz", "768-775/798-805",
         [(768, 775), (798, 805)], 14, (7, 7), CONTIGUOUS),
    _row(2, "Americas", "800 MHz", "806-809/851-854 MHz",
         [(806, 809), (851, 854)], 6, (3, 3), CONTIGUOUS),
    _row(2, "Americas", "800 MHz", "809-815/854-860 MHz",
         [(809, 815), (854, 860)], 3.5, (1.75, 1.75), NON_CONTIGUOUS),
    _row(2, "Americas", "4.9 GHz", "4940-4990 MHz", [(4940, 4990)], 50,
         contiguity=CONTIGUOUS),
    _row(2, "Americas", "5.9 GHz", "5850-5925 MHz band", [(5850, 5925)], 75,
         contiguity=CONTIGUOUS),
    _row(3, "Australia", "4.9 GHz", "4940-4990 MHz", [(4940, 4990)], 50,
         contiguity=CONTIGUOUS),
    _row(3, "Japan", "4.9 GHz", "4940-4990 MHz", [(4940, 4990)], 50,
         contiguity=CONTIGUOUS),
    _row(3, "South Korea", "700 MHz", "718-728/773-783",
         [(718, 728), (773, 783)], 20, (10, 10)),
)


def _sort_key(entry: SpectrumAllocation):
    low = entry.ranges_mhz[0][0] if entry.ranges_mhz else math.inf
    return entry.itu_region, entry.area.lower(), low


def load_registry() -> List[SpectrumAllocation]:
    entries = sorted(_TABLE, key=_sort_key)
    for entry in entries:
        entry.validate()
    return entries


def _parse_region(selector) -> Optional[int]:
    if isinstance(selector, int) and not isinstance(selector, bool):
        return selector
    text = str(selector).strip().lower()
    if text.startswith("region"):
        text = text[len("region"):].strip()
    return int(text) if text.isdigit() else None


def allocations_for(selector: Union[int, str]) -> List[SpectrumAllocation]:
    """Entries for an ITU region (``2``, ``"Region 2"``) or an area name.

    Area names match case-insensitively and exactly; an area such as
    "Americas" is not expanded into member states.
    """
    if isinstance(selector, str) and not selector.strip():
        raise ValidationError("selector must be non-empty")
    registry = load_registry()
    region = _parse_region(selector)
    if region is not None:
        found = [e for e in registry if e.itu_region == region]
    else:
        name = str(selector).strip().lower()
        found = [e for e in registry if e.area.lower() == name]
    if not found:
        raise AllocationNotFound(f"no spectrum allocation for {selector!r}")
    return found


def total_bandwidth(country: str) -> float:
    """Dedicated bandwidth in MHz; commercial-band entries add nothing."""
    return sum(e.bandwidth_mhz for e in allocations_for(country) if e.has_ranges)


def bands_overlapping(low_mhz: float, high_mhz: float) -> List[SpectrumAllocation]:
    """Entries with any range intersecting the half-open window ``[low, high)``."""
    if not low_mhz < high_mhz:
        raise ValidationError(f"need low < high, got [{low_mhz}, {high_mhz})")
    return [e for e in load_registry() if e.overlaps(low_mhz, high_mhz)]


CSV_FIELDS = ("itu_region", "area", "band_label", "printed_band", "ranges_mhz",
              "bandwidth_mhz", "bandwidth_max_mhz", "components_mhz", "contiguity", "note")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def to_csv(entries: List[SpectrumAllocation]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for e in entries:
        writer.writerow([
            e.itu_region, e.area, e.band_label, e.printed_band,
            ";".join(f"{_fmt(lo)}-{_fmt(hi)}" for lo, hi in e.ranges_mhz),
            _fmt(e.bandwidth_mhz), _fmt(e.bandwidth_max_mhz),
            "+".join(_fmt(c) for c in e.components_mhz),
            e.contiguity, e.note,
        ])
    return buf.getvalue()


def to_json(entries: List[SpectrumAllocation]) -> str:
    return json.dumps([dataclasses.asdict(e) for e in entries], indent=2) + "\n"
