#pragma once

// 40-digit values generated by tests/oracles/reference_values.py (mpmath),
// rounded to double.
namespace dephaselab::reference {

inline constexpr double kSi0p5 = 0.4931074180430666891616;
inline constexpr double kSi2 = 1.605412976802694848577;
inline constexpr double kSi10 = 1.658347594218874049331;
inline constexpr double kSi100 = 1.562225466889056293352;
inline constexpr double kSi1e4 = 1.570891545385961915722;

inline constexpr double kCi0p5 = -0.17778407880661290134;
inline constexpr double kCi2 = 0.42298082877486499570;
inline constexpr double kCi10 = -0.045456433004455372635;
inline constexpr double kCi100 = -0.0051488251426104921444;

// int_0^1 (1 - cos 100 w) / w^2 dw
inline constexpr double kOneMinusCos100 = 156.0848655611933132693;

// gamma_t = 4 int |g|^2 (1 - cos wt) dw, lambda = 1, omega_c = 1
inline constexpr double kGammaHardKm1T200 = 1252.654622171603890328;
inline constexpr double kGammaHardK0T50 = 17.97946822661518089866;
inline constexpr double kGammaHardK0p5T7 = 5.763657381000270892927;
inline constexpr double kGammaHardKm1p5T3 = 31.40711454604316237835;
inline constexpr double kGammaHardK2T13 = 1.872908443545644303002;
inline constexpr double kGammaExpK1T5 = 3.846153846153846153846;
inline constexpr double kGammaExpKm0p5T5 = 10.58203950669318463413;
inline constexpr double kGammaExpKm1p5T5 = 60.61102019952469275692;

inline constexpr double kGammaHalf = 1.772453850905516027298;

}  // namespace dephaselab::reference
