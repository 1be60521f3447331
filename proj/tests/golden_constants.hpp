#pragma once

#include <map>
#include <string>

namespace golden {

// Frozen output of tests/oracles/constants_chain.py (50-digit mpmath).
inline const std::map<std::string, double> kUnitGolden = {
    {"delta1", 0.13966421322296262196},   {"delta", 0.0009469696969696969697},
    {"k1", 0.035714285714285714286},      {"k2", 3.6277980232938774816},
    {"kappa", 0.000032628942229186282856}, {"eta", 0.000018055529715582134002},
    {"k3", 101.57834465222856948},        {"c2_550", 0.071428571428571428571},
    {"c5", 1.5},                          {"c6", 3.1047200908387525957},
    {"c7", 4.5559534384115231039},        {"c8", 2.3752367424242424242},
    {"poincare_c1", 0.10132118364233777144}, {"lambda_D", 0.98696044010893586188},
    {"kappa0", 0.000032628942229186282856},
};

inline const std::map<std::string, double> kExpGolden = {
    {"gamma_star", 0.53383382080915317297}, {"gamma_upper", 3.0},
    {"Gamma_star", 1.5},                    {"gpp_bound", 1.5},
    {"B", 1.75},                            {"b1", 1.2857142857142857143},
    {"B1", 1.3854166666666666667},          {"c2_550", 0.065789473684210526316},
    {"c2_66", 0.625},                       {"c3_66", 1.3345845520228829324},
    {"poincare_c1", 0.40528473456935108578}, {"embed_c1", 1.4142135623730950488},
    {"delta1", 0.21900890968621474661},     {"delta", 0.0096100782154329193584},
    {"k1", 0.032894736842105263158},        {"k2", 7.2495338345115717028},
    {"kappa", 0.00017691429853037589739},   {"c5", 3.375},
    {"c6", 11.789887717901397017},          {"c7", 9.4291073243760153369},
    {"c8", 3.6634575586615746895},          {"eta", 0.00011117285736861965593},
    {"k3", 220.38582856915177977},          {"lambda_D", 0.49348022005446793094},
    {"kappa0", 0.00017691429853037589739},
};

}  // namespace golden
