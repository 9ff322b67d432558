// Times the serial reference kernels against their OpenMP counterparts on a
// synthetic workload, then the full pipeline at both thread counts.
//
//   bench_kernels [pixels] [bands] [endmembers] [threads] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <hypercsi/dimred.hpp>
#include <hypercsi/estimator.hpp>
#include <hypercsi/kernels.hpp>
#include <hypercsi/synth.hpp>

using namespace hypercsi;

namespace {

template <typename F>
double best_of(int repeats, F&& body) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, s);
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-18s %10.4f ms %10.4f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    const int pixels = argc > 1 ? std::atoi(argv[1]) : 100000;
    const int bands = argc > 2 ? std::atoi(argv[2]) : 224;
    const int n = argc > 3 ? std::atoi(argv[3]) : 6;
    const int threads = argc > 4 ? std::atoi(argv[4]) : omp_get_max_threads();
    const int repeats = argc > 5 ? std::atoi(argv[5]) : 3;

    std::printf("workload: L=%d, M=%d, N=%d, %d threads, best of %d\n\n", pixels, bands, n,
                threads, repeats);

    synth::SceneSpec spec;
    spec.n_bands = bands;
    spec.n_pixels = pixels;
    spec.n_endmembers = n;
    spec.dirichlet_gamma = VectorXd::Constant(n, 1.0 / n);
    spec.snr_db = 30.0;
    spec.seed = 1;
    const synth::GroundTruth truth = synth::generate_scene(spec);
    const SpectralDataset data{truth.observed, n};

    const auto model = dimred::fit_affine_set(data, n);
    MatrixXd dr;
    std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");
    report("project",
           best_of(repeats,
                   [&] { kernels::project_columns_serial(model.basis, model.mean, data.pixels, dr); }),
           best_of(repeats, [&] {
               kernels::project_columns_parallel(model.basis, model.mean, data.pixels, dr, threads);
           }));

    MatrixXd lifted;
    report("lift",
           best_of(repeats, [&] { kernels::lift_columns_serial(model.basis, model.mean, dr, lifted); }),
           best_of(repeats, [&] {
               kernels::lift_columns_parallel(model.basis, model.mean, dr, lifted, threads);
           }));

    const MatrixXd centers = dr.leftCols(n);
    double radius = 1e300;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            radius = std::min(radius, 0.5 * (centers.col(a) - centers.col(b)).norm());
    report("ball_members",
           best_of(repeats, [&] { kernels::ball_members_serial(dr, centers, radius); }),
           best_of(repeats, [&] { kernels::ball_members_parallel(dr, centers, radius, threads); }));

    const VectorXd dir = dr.col(0);
    report("max_dot", best_of(repeats, [&] { kernels::max_dot_serial(dr, dir); }),
           best_of(repeats, [&] { kernels::max_dot_parallel(dr, dir, threads); }));

    report("argmax_sqnorm", best_of(repeats, [&] { kernels::argmax_sqnorm_serial(dr); }),
           best_of(repeats, [&] { kernels::argmax_sqnorm_parallel(dr, threads); }));

    const VectorXd u = dr.col(0);
    MatrixXd scratch;
    report("deflate",
           best_of(repeats,
                   [&] {
                       scratch = dr;
                       kernels::deflate_serial(scratch, u);
                   }),
           best_of(repeats, [&] {
               scratch = dr;
               kernels::deflate_parallel(scratch, u, threads);
           }));

    const UnmixResult once = unmix(data, n, {.threads = 1});
    const VectorXd h_eff = once.planes.constants / once.endmembers.shift_c;
    VectorXd denom(n);
    for (int i = 0; i < n; ++i)
        denom(i) = h_eff(i) - once.planes.normals.col(i).dot(once.endmembers.dr_vertices.col(i));
    MatrixXd abundances;
    report("abundance_rows",
           best_of(repeats,
                   [&] {
                       kernels::abundance_rows_serial(dr, once.planes.normals, h_eff, denom,
                                                      abundances);
                   }),
           best_of(repeats, [&] {
               kernels::abundance_rows_parallel(dr, once.planes.normals, h_eff, denom, abundances,
                                                threads);
           }));

    report("unmix (end-to-end)",
           best_of(repeats, [&] { unmix(data, n, {.threads = 1}); }),
           best_of(repeats, [&] { unmix(data, n, {.threads = threads}); }));

    const UnmixResult check_serial = unmix(data, n, {.threads = 1});
    const UnmixResult check_parallel = unmix(data, n, {.threads = threads});
    const bool identical = check_serial.endmembers.spectra == check_parallel.endmembers.spectra &&
                           check_serial.abundances == check_parallel.abundances;
    std::printf("\nserial/parallel results identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
