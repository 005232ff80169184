// Generated by scripts/derive_sbp.py. Do not edit by hand.
#pragma once

#include <array>
#include <span>

namespace sbpsat::detail {

struct ClosureTable {
  int interior_half_width;  // central stencil reaches i +- this
  int block;                // boundary rows with one-sided closure
  int block_cols;           // columns touched by the closure rows
  std::span<const double> interior;  // c_1..c_k, D_ii+j = c_j / h
  std::span<const double> weights;   // H_ii / h for i < block
  std::span<const double> rows;      // block x block_cols, row-major, times 1/h
};

inline constexpr std::array<double, 1> kInterior2 = {
    0.5};
inline constexpr std::array<double, 1> kWeights2 = {
    0.5,
};
inline constexpr std::array<double, 2> kRows2 = {
    -1.0, 1.0,
};

inline constexpr std::array<double, 2> kInterior3 = {
    0.6666666666666666666667, -0.08333333333333333333333};
inline constexpr std::array<double, 4> kWeights3 = {
    0.3541666666666666666667,
    1.229166666666666666667,
    0.8958333333333333333333,
    1.020833333333333333333,
};
inline constexpr std::array<double, 24> kRows3 = {
    -1.411764705882352941176, 1.735294117647058823529, -0.2352941176470588235294, -0.08823529411764705882353, 0.0, 0.0,
    -0.5, 0.0, 0.5, 0.0, 0.0, 0.0,
    0.09302325581395348837209, -0.6860465116279069767442, 0.0, 0.6860465116279069767442, -0.09302325581395348837209, 0.0,
    0.03061224489795918367347, 0.0, -0.6020408163265306122449, 0.0, 0.6530612244897959183673, -0.08163265306122448979592,
};

inline constexpr std::array<double, 3> kInterior4 = {
    0.75, -0.15, 0.01666666666666666666667};
inline constexpr std::array<double, 6> kWeights4 = {
    0.3159490740740740740741,
    1.390393518518518518519,
    0.6275462962962962962963,
    1.240509259259259259259,
    0.9116898148148148148148,
    1.013912037037037037037,
};
inline constexpr std::array<double, 54> kRows4 = {
    -1.582533518939116418785, 2.033426786468126321146, -0.141705289814674430065, -0.4501096599735704488288, 0.1042956382142409971946, 0.03662604404499397933836, 0.0, 0.0, 0.0,
    -0.4620701275035953742999, 0.0, 0.2873679417026204096655, 0.2585974499280925140023, -0.06894808744606938550171, -0.01494717668104816386621, 0.0, 0.0, 0.0,
    0.07134398748360351515888, -0.6366933020423421212305, 0.0, 0.6067199374180175757944, -0.02338660408468424246108, -0.01798401877459472726167, 0.0, 0.0, 0.0,
    0.1146397975178067373776, -0.2898424301162693945428, -0.3069262456316935338643, 0.0, 0.5203848121857540879497, -0.05169127637022749199398, 0.01343534241462959507371, 0.0, 0.0,
    -0.03614399304268567654461, 0.1051508663818244925774, 0.0160977741966685238827, -0.7080721616106274361617, 0.0, 0.769216085866111196919, -0.1645296432652024882569, 0.01828107147391138758411, 0.0,
    -0.01141318406360865788428, 0.02049729840293961239753, 0.01113095018331232291646, 0.06324365883611084897508, -0.6916640154753724684518, 0.0, 0.7397091390607520376247, -0.1479418278121504075249, 0.01643798086801671194722,
};

inline constexpr std::array<double, 4> kInterior5 = {
    0.8, -0.2, 0.0380952380952380952381, -0.003571428571428571428571};
inline constexpr std::array<double, 8> kWeights5 = {
    0.2948906761778785588309,
    1.525720623897707231041,
    0.257452876984126984127,
    1.798113701499118165785,
    0.4127080577601410934744,
    1.278484623015873015873,
    0.9232955798059964726631,
    1.009333860859158478206,
};
inline constexpr std::array<double, 96> kRows5 = {
    -1.69554360443189850875, 2.23688224523892640667, 0.01233268074591209493912, -0.8542042605303424226101, 0.06653815166683465285931, 0.3554663152084018906123, -0.1078816874357675311392, -0.01358984046206660396665, 0.0, 0.0, 0.0, 0.0,
    -0.4323437118806514966958, 0.0, 0.06511662980546497041922, 0.5564467667954776769225, -0.07825678274709121619689, -0.1758586010925605997253, 0.06152331738171979405892, 0.003372381737640875350652, 0.0, 0.0, 0.0, 0.0,
    -0.01412605136462368772951, -0.3858950275356036157539, 0.0, -0.1338294558707833598253, 0.9142968386237014915788, -0.3548412889552526371562, -0.08363758971147825249265, 0.05803257481404006137882, 0.0, 0.0, 0.0, 0.0,
    0.1400895125663113991074, -0.4721516261698284826272, 0.01916162387863898746283, 0.0, 0.01495001145594747582182, 0.4039283555006555560579, -0.09623169570755737488432, -0.00974618152416756093847, 0.0, 0.0, 0.0, 0.0,
    -0.04754324556479287104573, 0.2893037466850512085165, -0.5703507530205958060542, -0.06513519649313751347959, 0.0, 0.2618243096615664030288, 0.1769725266837380269558, -0.03641774403992835052472, -0.008653643911901097396896, 0.0, 0.0, 0.0,
    -0.08199058491841017035736, 0.2098665011267705817499, 0.07145561946516387479752, -0.5681015613128089727797, -0.08451959481523872340288, 0.0, 0.5076322298417994704017, -0.0813463049361281123602, 0.02979718129528502284257, -0.002793485746432970891491, 0.0, 0.0,
    0.03445625046946360021748, -0.1016655946729623289971, 0.02332160855764366332334, 0.1874107646075930980519, -0.07910574832373513448173, -0.7029168277144447545184, 0.0, 0.8177229659852169332225, -0.2166153552278720352907, 0.04126006766245181624585, -0.003868131343354857773049, 0.0,
    0.003970457544738529008594, -0.00509773085824636030292, -0.01480248897223513131226, 0.0173626816809513900766, 0.01489090675896985656511, 0.1030382552622120587651, -0.7480181031054817727657, 0.0, 0.792601963555477375116, -0.198150490888869343779, 0.03774295064549892262457, -0.003538401623015523996054,
};

}  // namespace sbpsat::detail
