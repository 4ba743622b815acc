from enum import Enum


class InputKind(str, Enum):
    tick = 'tick'
    gridded = 'gridded'
    simulated = 'simulated'


class RejectReason(str, Enum):
    wrong_length = 'WrongLength'
    non_finite = 'NonFinite'
    empty_day = 'EmptyDay'
    no_price_before_open = 'NoPriceBeforeOpen'
    degenerate_day = 'DegenerateDay'


class Horizon(int, Enum):
    daily = 1
    weekly = 5
    monthly = 22


class RegressionSpec(str, Enum):
    simple = 'simple'
    lagged = 'lagged'
    decomposed = 'decomposed'

    @property
    def coef_names(self):
        """
        Coefficient names in design-column order.
        """
        return {
            'simple': ('b', 'c'),
            'lagged': ('b', 'c0', 'c1'),
            'decomposed': ('b', 'coef_expected', 'coef_unexpected'),
        }[self.value]


class HarRefitMode(str, Enum):
    full_sample = 'full_sample'
    per_window = 'per_window'


class SeMode(str, Enum):
    ols = 'ols'
    white = 'white'


class SimModel(str, Enum):
    iid_gaussian = 'iid_gaussian'
    ar1 = 'ar1'
    har_cascade = 'har_cascade'
