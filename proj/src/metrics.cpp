#include "pronet/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pronet {

std::vector<double> MetricsLog::series(const std::string& scope,
                                       const std::string& id, double t0,
                                       double t1) const {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.scope == scope && r.id == id && r.time > t0 && r.time <= t1 + 1e-12)
            out.push_back(r.throughputBps);
    return out;
}

double MetricsLog::seriesAvg(const std::string& scope, const std::string& id,
                             double t0, double t1) const {
    auto xs = series(scope, id, t0, t1);
    if (xs.empty()) return 0.0;
    double s = 0;
    for (double x : xs) s += x;
    return s / xs.size();
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::string MetricsLog::metricsCsv() const {
    std::ostringstream os;
    os << "time,scope,id,throughput_bps,bytes,drops\n";
    for (const auto& r : rows)
        os << fmt(r.time) << ',' << r.scope << ',' << r.id << ','
           << fmt(r.throughputBps) << ',' << r.bytes << ',' << r.drops << '\n';
    return os.str();
}

std::string MetricsLog::fctCsv() const {
    std::ostringstream os;
    os << "flowId,tenantId,size,start,finish,fct_s\n";
    for (const auto& r : fct)
        os << r.flowId << ',' << r.tenantId << ',' << r.sizeBytes << ','
           << fmt(r.start) << ',' << fmt(r.finish) << ','
           << fmt(r.finish - r.start) << '\n';
    return os.str();
}

std::string MetricsLog::coordinatorCsv() const {
    std::ostringstream os;
    os << "windowId,tenantId,hostId,inputFS,targetFS\n";
    for (const auto& r : coordinator)
        os << r.windowId << ',' << r.tenantId << ',' << r.hostId << ','
           << fmt(r.inputFS) << ',' << fmt(r.targetFS) << '\n';
    return os.str();
}

double cov(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("cov of empty group");
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    if (mean == 0) throw std::invalid_argument("cov of zero-mean group");
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= xs.size();
    return std::sqrt(var) / mean;
}

double compute_fairness(const MetricsLog& log,
                        const std::vector<std::string>& flowIds, double t0,
                        double t1) {
    std::vector<double> means;
    for (const auto& id : flowIds) means.push_back(log.seriesAvg("flow", id, t0, t1));
    return cov(means);
}

}  // namespace pronet
