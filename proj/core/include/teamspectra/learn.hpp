#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace teamspectra::learn {

struct Dataset {
    Eigen::MatrixXd x;   // rows = observations
    std::vector<int> y;  // binary labels, 0 or 1

    Eigen::Index rows() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); }
};

class Classifier {
public:
    virtual ~Classifier() = default;

    virtual void fit(const Dataset& train) = 0;

    // P(y = 1) per row. Only valid after fit.
    virtual Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const = 0;

    // Non-negative, sums to 1 (uniform when the model carries no signal).
    // Only valid after fit.
    virtual Eigen::VectorXd feature_importances() const = 0;

    // Training saw a single label value; the fitted model is the constant
    // probability of that label.
    bool single_class_train() const { return single_class_; }

protected:
    // When train carries one label value only, remember the constant and
    // report true; fit implementations then stop early and predictions,
    // importances fall back to constant_probability / uniform_importances.
    bool adopt_if_single_class(const Dataset& train) {
        single_class_ = !train.y.empty();
        for (int label : train.y) {
            if (label != train.y.front()) {
                single_class_ = false;
                break;
            }
        }
        if (single_class_) {
            constant_ = static_cast<double>(train.y.front());
            n_features_ = train.x.cols();
        }
        return single_class_;
    }

    double constant_probability() const { return constant_; }

    Eigen::VectorXd uniform_importances() const {
        return Eigen::VectorXd::Constant(n_features_,
                                         1.0 / static_cast<double>(n_features_));
    }

private:
    bool single_class_ = false;
    double constant_ = 0.5;
    Eigen::Index n_features_ = 1;
};

enum class Algo { Blr, Tree, Forest, Gbt };

Algo parse_algo(const std::string& text);  // "blr" | "tree" | "forest" | "gbt"
std::string to_string(Algo algo);

// Default-configured model; seed feeds the stochastic ones (forest) and is
// ignored by the deterministic ones.
std::unique_ptr<Classifier> make_classifier(Algo algo, std::uint64_t seed);

}  // namespace teamspectra::learn
