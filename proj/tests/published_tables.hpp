#pragma once

// Benchmark spectra for the four-site chain: Bethe root sets (4 decimals)
// and the eigenvalues they belong to.  Shared by the unit tests and the
// acceptance runner.

#include <utility>
#include <vector>

#include "asep/bethe.hpp"
#include "asep/types.hpp"

namespace asep::tables {

using RootData = std::vector<std::pair<std::vector<complexd>, complexd>>;

// q = 0.1, alpha = 0.23, beta = 0.32, gamma = 0.47, delta = 0.6, N = 4.
inline const BoundaryRates kGenericRates{0.23, 0.32, 0.47, 0.6, 0.1, 4};

// Constraint benchmarks share q = 0.5, alpha = 0.23, beta = 0.32,
// gamma = 0.17; delta is solved per class.
inline const BoundaryRates kConstraintBase{0.23, 0.32, 0.17, 0.0, 0.5, 4};

// All 16 eigenvalues printed for the generic benchmark.
inline const std::vector<complexd> kGenericSpectrum{
    {0.0, 0.0},           {-0.2634, 0.0},       {-3.2590, 0.5999},
    {-3.2590, -0.5999},   {-2.4104, 0.3628},    {-2.4104, -0.3628},
    {-1.3430, 0.8503},    {-1.3430, -0.8503},   {-2.0913, 0.0},
    {-0.7852, 0.2111},    {-0.7852, -0.2111},   {-1.2358, 0.5220},
    {-1.2358, -0.5220},   {-1.6171, 0.2869},    {-1.6171, -0.2869},
    {-1.3044, 0.0},
};

// Kind-I root sets of the 15 decaying levels of the generic benchmark.
inline const RootData kKindOne{
    {{{0.9702, -0.9849}, {0.0166, 0.1513}, {0.3762, 0.4221}}, {-3.2590, 0.5999}},
    {{{0.3762, -0.4221}, {0.9702, 0.9849}, {0.0717, 0.6529}}, {-3.2590, -0.5999}},
    {{{2.3555, -0.9589}, {2.2560, 0.0}, {2.3555, 0.9589}}, {-0.2634, 0.0}},
    {{{1.7812, -0.8533}, {0.1683, -0.6900}, {0.3323, 0.6834}}, {-2.4104, 0.3628}},
    {{{0.3323, -0.6834}, {0.1683, 0.6900}, {1.7812, 0.8533}}, {-2.4104, -0.3628}},
    {{{-0.2418, -0.9907}, {2.2672, -0.4367}, {1.5293, -1.6967}}, {-1.3430, 0.8503}},
    {{{-0.2418, 0.9907}, {2.2672, 0.4367}, {1.5293, 1.6967}}, {-1.3430, -0.8503}},
    {{{0.2413, 0.6866}, {0.2413, -0.6866}, {2.0174, 0.0}}, {-2.0913, 0.0}},
    {{{0.0314, -1.2867}, {2.2162, -0.1875}, {2.2462, 0.5359}}, {-0.7852, 0.2111}},
    {{{2.2162, 0.1875}, {0.0314, 1.2867}, {2.2462, -0.5359}}, {-0.7852, -0.2111}},
    {{{2.2388, 0.3399}, {1.7052, -1.5918}, {-0.1620, -1.0905}}, {-1.2358, 0.5220}},
    {{{2.2388, -0.3399}, {1.7052, 1.5918}, {-0.1620, 1.0905}}, {-1.2358, -0.5220}},
    {{{0.2499, -1.3356}, {2.0462, -1.1818}, {0.9432, 1.5458}}, {-1.6171, 0.2869}},
    {{{2.0462, 1.1818}, {0.9432, -1.5458}, {0.2499, 1.3356}}, {-1.6171, -0.2869}},
    {{{0.5919, -1.4077}, {0.5919, 1.4077}, {2.1651, 0.0}}, {-1.3044, 0.0}},
};

inline const RootData kClass1KindThree{
    {{{0.6968, 0.1206}, {0.5683, -0.4208}}, {-2.8518, 0.0}},
    {{{3.9600, 0.0}, {0.6991, -0.1064}}, {-2.3998, 0.0}},
    {{{0.3414, 0.0}, {0.7039, 0.0669}}, {-2.0923, 0.0}},
    {{{3.7661, 0.0}, {0.6575, 0.2602}}, {-1.6596, 0.0}},
    {{{0.6739, -0.2140}, {1.6342, 0.0}}, {-1.5453, 0.0}},
    {{{0.2671, -0.0215}, {0.2671, 0.0215}}, {-0.3180, 0.0}},
    {{{0.6623, -0.9669}, {0.2411, -0.3520}}, {-1.0991, 0.0}},
    {{{0.3507, 0.6140}, {2.7996, 0.0}}, {-0.9242, 0.0}},
    {{{5.8061, 0.0}, {1.8539, 0.0}}, {-0.5230, 0.0}},
    {{{1.7541, 0.0}, {0.4337, -0.5585}}, {-0.7826, 0.0}},
    {{{0.0778, 0.0}, {2.1292, 0.0}}, {-0.6020, 0.0}},
};
inline const RootData kClass1KindFour{
    {{{0.7026, 0.0797}}, {-1.7579, 0.0}},
    {{{0.1795, 0.6839}}, {-0.1461, 0.0}},
    {{{0.6843, -0.1781}}, {-1.2688, 0.0}},
    {{{0.6229, 0.3347}}, {-0.6554, 0.0}},
};

inline const RootData kClass2KindThree{
    {{{0.6984, -0.1104}}, {-2.5526, 0.0}},
    {{{0.6497, -0.2790}}, {-1.7676, 0.0}},
    {{{0.0614, 0.7044}}, {-1.0575, 0.0}},
    {{{0.2897, 0.0}}, {-0.6133, 0.0}},
    {{{0.2284, 0.0}}, {-0.7549, 0.0}},
};
inline const RootData kClass2KindFour{
    {{{0.6773, 0.2031}, {0.7020, -0.0847}}, {-2.8832, 0.0}},
    {{{0.5332, 0.4644}, {0.7024, 0.0812}}, {-2.1364, 0.0}},
    {{{0.2828, -0.6481}, {12.8949, 0.0}}, {-0.1638, 0.0}},
    {{{0.7030, 0.0762}, {10.6140, 0.0}}, {-1.7543, 0.0}},
    {{{0.6817, 0.1877}, {0.5411, -0.4552}}, {-1.6196, 0.0}},
    {{{0.3089, 0.3514}, {0.7056, 0.8026}}, {-0.3684, 0.0}},
    {{{0.0466, 0.0}, {0.6862, 0.1708}}, {-1.2874, 0.0}},
    {{{0.8613, 0.0}, {1.1611, 0.0}}, {-1.0468, 0.0}},
    {{{0.6304, 0.3204}, {11.0615, 0.0}}, {-0.6793, 0.0}},
    {{{0.4698, 0.1718}, {0.9388, 0.3433}}, {-0.8067, 0.0}},
};

// Class 3 has no printed kind-III sets: the single kind-III level carries no
// roots and sits at minus the sum of the boundary rates (-1.1529 printed).
inline const RootData kClass3KindFour{
    {{{1.6804, -0.4682}, {0.6695, -0.1645}, {0.7090, 0.0707}}, {-2.9014, 0.0703}},
    {{{0.7043, -0.1730}, {0.6982, 0.0697}, {0.2761, -0.0769}}, {-2.9014, -0.0703}},
    {{{0.0532, 0.0490}, {0.3896, -0.5901}, {0.0532, -0.0490}}, {-0.1963, 0.0}},
    {{{0.1870, 0.0}, {0.7037, 0.0690}, {0.5976, -0.3780}}, {-2.2253, 0.0}},
    {{{0.3930, -0.2946}, {0.1415, 0.0}, {0.3930, 0.2946}}, {-0.4493, 0.0}},
    {{{4.3284, -4.1062}, {0.6413, -0.2978}, {0.0608, -0.0577}}, {-0.7280, 0.0}},
    {{{0.5249, 0.1373}, {0.4457, -0.1166}, {0.2093, 0.1119}}, {-0.8037, 0.0679}},
    {{{0.8915, 0.2332}, {1.0499, -0.2747}, {1.8581, 0.9935}}, {-0.8037, -0.0679}},
    {{{0.1680, 0.1227}, {0.3877, 0.0016}, {0.7754, 0.0033}}, {-1.0997, 0.1109}},
    {{{0.1680, -0.1227}, {0.3877, -0.0016}, {0.7754, -0.0033}}, {-1.0997, -0.1109}},
    {{{4.1702, 4.0169}, {4.1702, -4.0169}, {0.6896, 0.1562}}, {-1.3411, 0.0}},
    {{{0.6718, 0.0}, {0.6435, -0.2931}, {1.3394, 0.0}}, {-1.9846, 0.0}},
    {{{4.1231, -3.9934}, {0.7040, -0.0663}, {4.1231, 3.9934}}, {-1.7716, 0.0}},
    {{{0.5993, 0.3753}, {2.8148, 0.0}, {0.6870, 0.1673}}, {-1.7648, 0.0}},
};

inline const RootData kClass4KindFour{
    {{{0.3211, 0.1298}, {-0.0017, -0.8776}, {0.7271, 0.0084}, {0.6570, -0.1524}},
     {-3.2814, 0.1934}},
    {{{0.3211, -0.1298}, {-0.0017, 0.8776}, {0.7271, -0.0084}, {0.6570, 0.1524}},
     {-3.2814, -0.1934}},
    {{{1.5779, -2.8221}, {4.3501, 0.0}, {1.5779, 2.8221}, {0.4753, 0.5236}},
     {-0.2400, 0.0}},
    {{{0.0574, -0.7553}, {0.6592, 0.3317}, {1.5888, -0.2133}, {0.6799, -0.0045}},
     {-2.4314, 0.0716}},
    {{{0.0574, 0.7553}, {0.6592, -0.3317}, {1.5888, 0.2133}, {0.6799, 0.0045}},
     {-2.4314, -0.0716}},
    {{{0.8513, 0.5881}, {0.3213, 0.6299}, {2.3196, 0.0}, {0.8513, -0.5881}},
     {-0.5524, 0.0}},
    {{{3.7321, 0.0}, {0.0793, 0.1603}, {0.6534, 0.2703}, {0.0793, -0.1603}},
     {-0.8034, 0.0}},
    {{{0.0901, -1.0542}, {1.5430, -0.7324}, {1.0936, 0.2566}, {0.8667, -0.2035}},
     {-0.9090, 0.1710}},
    {{{1.0936, -0.2566}, {0.0901, 1.0542}, {0.8667, 0.2035}, {1.5430, 0.7324}},
     {-0.9090, -0.1710}},
    {{{0.6237, -0.3331}, {0.2777, 0.0}, {0.6947, -0.1320}, {0.0957, 0.7006}},
     {-2.0050, 0.0}},
    {{{0.1410, 0.0}, {0.0771, 0.1660}, {1.1509, 2.4781}, {0.6814, 0.0}},
     {-1.9055, 0.0}},
    {{{1.8012, -0.9756}, {1.4831, -0.0085}, {0.0436, -1.3395}, {0.6729, -0.0003}},
     {-1.4569, 0.2057}},
    {{{1.8012, 0.9756}, {1.4831, 0.0085}, {0.0436, 1.3395}, {0.6729, 0.0003}},
     {-1.4569, -0.2057}},
    {{{1.5049, 0.0}, {1.0602, -1.1811}, {0.2104, -0.2344}, {0.7420, 0.0}},
     {-1.5670, 0.0}},
    {{{1.1700, -2.4853}, {0.6950, 0.1302}, {1.1700, 2.4853}, {3.5943, 0.0}},
     {-1.4564, 0.0}},
};

inline BetheRootSet make_set(TQKind kind, const std::vector<complexd>& roots) {
    BetheRootSet s;
    s.kind = kind;
    s.roots = roots;
    return s;
}

}  // namespace asep::tables
