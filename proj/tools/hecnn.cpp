// Copyright 2026 The hecnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hecnn/chebyshev/chebyshev.hpp"
#include "hecnn/cli/run_config.hpp"
#include "hecnn/common/errors.hpp"
#include "hecnn/common/prng.hpp"
#include "hecnn/data/mnist.hpp"
#include "hecnn/encinfer/bundle.hpp"
#include "hecnn/encinfer/encinfer.hpp"
#include "hecnn/encinfer/planner.hpp"
#include "hecnn/encoding/quantize.hpp"
#include "hecnn/nn/model.hpp"
#include "hecnn/nn/network.hpp"
#include "hecnn/nn/train.hpp"
#include "hecnn/she/batch_encoder.hpp"
#include "hecnn/she/decryptor.hpp"
#include "hecnn/she/encryptor.hpp"
#include "hecnn/she/evaluator.hpp"
#include "hecnn/she/keys.hpp"
#include "hecnn/she/params.hpp"
#include "hecnn/she/serialize.hpp"

namespace {

using namespace hecnn;
using cli::RunConfig;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Everything written to stdout is also kept for --out.
class Report {
 public:
  template <typename T>
  Report& operator<<(const T& v) {
    std::cout << v;
    buf_ << v;
    return *this;
  }
  void flush_to(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw data_error("cannot write " + path);
    f << buf_.str();
  }

 private:
  std::ostringstream buf_;
};

struct Invocation {
  RunConfig cfg;
  std::set<std::string> explicit_keys;
  bool print_config = false;
};

// Flags registered for one subcommand, each mirroring a config key.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool print_config = false;

  void add(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_path, "key=value config file (flags override it)");
    app->add_flag("--print-config", print_config, "print the effective configuration and exit");
    for (const auto& k : keys) {
      options[k] = app->add_option(cli::flag_name(k), values[k], "config key " + k);
    }
  }

  Invocation resolve() const {
    Invocation inv;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw usage_error("cannot read config file " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      RunConfig probe;
      probe.merge_text(ss.str());
      inv.cfg = probe;
      std::istringstream lines(ss.str());
      std::string line;
      while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        const auto hash = line.find('#');
        if (eq == std::string::npos || (hash != std::string::npos && hash < eq)) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::replace(key.begin(), key.end(), '-', '_');
        inv.explicit_keys.insert(key);
      }
    }
    for (const auto& [k, opt] : options) {
      if (opt->count() > 0) {
        inv.cfg.set(k, values.at(k));
        inv.explicit_keys.insert(k);
      }
    }
    inv.print_config = print_config;
    return inv;
  }
};

std::string mnist_dir(const RunConfig& c) {
  return c.data_dir.empty() ? data::default_mnist_dir() : c.data_dir;
}

void require_mnist(const std::string& dir) {
  if (!data::mnist_available(dir)) {
    throw data_error("MNIST files not found in " + dir +
                     " (set HECNN_MNIST_DIR or --data-dir; see scripts/fetch_mnist.sh)");
  }
}

std::pair<data::Dataset, data::Dataset> training_split(const RunConfig& c, std::uint64_t seed) {
  const auto dir = mnist_dir(c);
  require_mnist(dir);
  if (c.train_size < 0 || c.test_size <= 0) throw usage_error("split sizes must be positive");
  return data::split(data::load_mnist_train(dir), static_cast<std::size_t>(c.train_size),
                     static_cast<std::size_t>(c.test_size), seed);
}

data::Dataset test_slice(const RunConfig& c) {
  const auto dir = mnist_dir(c);
  require_mnist(dir);
  const auto all = data::load_mnist_test(dir);
  if (c.images <= 0 || c.offset < 0 ||
      static_cast<std::size_t>(c.offset + c.images) > all.size()) {
    throw usage_error("image range [" + std::to_string(c.offset) + ", " +
                      std::to_string(c.offset + c.images) + ") is outside the test set");
  }
  data::Dataset out;
  out.name = all.name;
  for (int i = c.offset; i < c.offset + c.images; ++i) {
    out.images.push_back(all.images[static_cast<std::size_t>(i)]);
    out.labels.push_back(all.labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Model file plus the network and activation it should run with. Explicit
// --net / --activation override the metadata stored in the model.
struct LoadedModel {
  nn::Model model;
  nn::NetworkConfig config;
  bool trained = true;
};

nn::ActivationSpec with_degree(const nn::ActivationSpec& act, int degree) {
  if (act.kind != nn::ActKind::kPoly) {
    throw usage_error("--degree needs a polynomial activation (poly:func:d:a:b)");
  }
  return nn::ActivationSpec::poly(act.approx.func, degree, act.approx.a, act.approx.b);
}

LoadedModel load_model(const Invocation& inv, bool allow_untrained, int degree = 0) {
  const auto& c = inv.cfg;
  LoadedModel lm;
  std::string net = c.net, act = c.activation;
  if (!c.model.empty()) {
    lm.model = nn::Model::load(c.model);
    if (!inv.explicit_keys.count("net") && !lm.model.meta.network.empty()) net = lm.model.meta.network;
    if (!inv.explicit_keys.count("activation") && !lm.model.meta.activation.empty()) {
      act = lm.model.meta.activation;
    }
  } else if (!allow_untrained) {
    throw usage_error("--model is required");
  }
  auto spec = nn::ActivationSpec::parse(act);
  if (degree > 0) spec = with_degree(spec, degree);
  lm.config = nn::NetworkConfig::preset(net, spec);
  if (c.model.empty()) {
    Prng rng(c.seed);
    lm.model = nn::Model::glorot(lm.config, rng);
    lm.trained = false;
  }
  lm.model.check(lm.config);
  return lm;
}

encoding::FixedPointConfig fixed_point(const RunConfig& c, u128 t) {
  encoding::FixedPointConfig fp;
  fp.input_scale_bits = c.input_scale_bits;
  fp.weight_scale_bits = c.weight_scale_bits;
  fp.coeff_scale_bits = c.coeff_scale_bits;
  fp.t = t;
  fp.validate();
  return fp;
}

std::string bits_of(const mpz_class& v) {
  if (v == 0) return "0";
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << std::log2(v.get_d());
  return os.str();
}

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

int parse_t_bits(const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error("invalid --t-bits '" + s + "' (expected a bit count or auto)");
  }
}

// t sized from shadow maxima: the images themselves (bench) or a
// calibration set (keygen).
int auto_t_bits(const LoadedModel& lm, const RunConfig& c, const std::vector<nn::Tensor>& images,
                Report& out) {
  const u128 wide = static_cast<u128>(1) << 126;
  const auto net = encoding::QuantizedNetwork::build(lm.config, lm.model, fixed_point(c, wide));
  const auto shadow = encinfer::calibrate(net, images, c.headroom_bits, c.threads);
  const int bits = encinfer::required_t_bits(shadow, c.headroom_bits);
  out << "shadow maximum 2^" << bits_of(shadow.max_magnitude) << " over " << images.size()
      << " images; t sized to " << bits << " bits (headroom " << c.headroom_bits << ")\n";
  return bits;
}

she::HEParams params_for(const RunConfig& c, int t_bits) {
  auto p = she::HEParams::preset(c.preset, t_bits);
  p.validate();
  return p;
}

struct KeyPaths {
  std::string params, pk, sk, rlk;
};

KeyPaths key_paths(const RunConfig& c) {
  if (c.keys.empty()) throw usage_error("--keys DIR is required");
  const std::filesystem::path d(c.keys);
  return {(d / "params.txt").string(), (d / "public.key").string(), (d / "secret.key").string(),
          (d / "relin.key").string()};
}

she::SheContextPtr load_context(const KeyPaths& kp) {
  std::ifstream in(kp.params);
  if (!in) throw data_error("cannot read " + kp.params);
  return she::SheContext::create(she::read_params(in));
}

template <typename T, typename Reader>
T read_key(const std::string& path, const she::SheContextPtr& ctx, Reader reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  return reader(in, ctx);
}

template <typename Writer, typename Key>
void write_file(const std::string& path, Writer writer, const Key& key) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw data_error("cannot write " + path);
  writer(os, key);
  if (!os) throw data_error("write failed for " + path);
}

// ---------------------------------------------------------------- approx

struct ApproxArgs {
  std::string func = "relu";
  int degree = 7;
  std::vector<double> interval = {-10, 10};
  int nodes = 0;
  std::vector<double> xs;
  std::string out;
};

int run_approx(const ApproxArgs& a) {
  Report out;
  if (a.interval.size() != 2) throw usage_error("--interval takes two numbers a b");
  const auto id = chebyshev::parse_func(a.func);
  const auto approx = chebyshev::fit(id, a.degree, a.interval[0], a.interval[1], a.nodes);
  const auto f = chebyshev::function_for(id);
  std::vector<double> xs = a.xs;
  if (xs.empty()) {
    for (double x = std::ceil(a.interval[0] + 1); x <= std::floor(a.interval[1] - 1) + 1e-9; x += 1) {
      xs.push_back(x);
    }
  }
  out << chebyshev::func_name(id) << " degree " << a.degree << " on [" << a.interval[0] << ", "
      << a.interval[1] << "]\n";
  out << std::setw(6) << "x" << std::setw(16) << "f(x)" << std::setw(16) << "p(x)" << std::setw(16)
      << "f(x)-p(x)" << "\n";
  for (const auto& r : chebyshev::error_table(approx, f, xs)) {
    std::ostringstream row;
    row << std::setw(6) << r.x << std::scientific << std::setprecision(6) << std::setw(16) << r.f
        << std::setw(16) << r.p << std::setw(16) << r.diff << "\n";
    out << row.str();
  }
  const auto err = chebyshev::max_error(approx, f, 10001);
  std::ostringstream e;
  e << std::scientific << std::setprecision(4) << "max |f-p| on the interval: " << err.e_max
    << " at x=" << std::defaultfloat << err.argmax << "\n";
  out << e.str();
  out << "coefficients (Chebyshev T_k, monomial x^k):\n";
  for (std::size_t k = 0; k < approx.mono_coeffs.size(); ++k) {
    std::ostringstream row;
    row << "  k=" << std::setw(2) << k << std::scientific << std::setprecision(6) << std::setw(16)
        << approx.cheb_coeffs[k] << std::setw(16) << approx.mono_coeffs[k] << "\n";
    out << row.str();
  }
  out.flush_to(a.out);
  return 0;
}

// ---------------------------------------------------------------- train / eval

int run_train(const Invocation& inv) {
  const auto& c = inv.cfg;
  Report out;
  const auto config = nn::NetworkConfig::preset(c.net, nn::ActivationSpec::parse(c.activation));
  auto [train_set, test_set] = training_split(c, c.seed);
  if (c.epochs < 0 || c.batch <= 0) throw usage_error("epochs must be >= 0 and batch > 0");
  nn::Hyperparams hp;
  hp.learning_rate = c.lr;
  hp.momentum = c.momentum;
  hp.batch_size = static_cast<std::size_t>(c.batch);
  hp.epochs = static_cast<std::uint32_t>(c.epochs);
  hp.threads = c.threads;
  out << "training " << c.net << " with " << config.layers[1].activation.to_string() << " on "
      << train_set.size() << " images, testing on " << test_set.size() << "\n";
  const auto start = Clock::now();
  auto result = nn::train(config, train_set, test_set, hp, c.seed, [&](const nn::EpochStats& s) {
    out << "epoch " << s.epoch << " loss " << fmt(s.loss, 4) << " train " << fmt(s.train_accuracy, 4)
        << " test " << fmt(s.test_accuracy, 4) << "\n";
  });
  result.model.meta.activation = c.activation;
  const std::string path = c.model.empty() ? "model.bfnn" : c.model;
  result.model.save(path);
  out << "test accuracy " << fmt(result.model.meta.accuracy, 4) << "\n";
  out << "trained in " << fmt(seconds_since(start), 1) << " s; model written to " << path << "\n";
  out.flush_to(c.out);
  return 0;
}

int run_eval(const Invocation& inv) {
  const auto& c = inv.cfg;
  Report out;
  const auto lm = load_model(inv, false);
  const std::uint64_t seed = inv.explicit_keys.count("seed") ? c.seed : lm.model.meta.seed;
  auto split = training_split(c, seed);
  const double acc = nn::accuracy(lm.config, lm.model, split.second, c.threads);
  out << "evaluating " << lm.config.name << " with " << lm.config.activations()[0]->activation.to_string()
      << " on " << split.second.size() << " held-out images\n";
  out << "test accuracy " << fmt(acc, 4) << "\n";
  if (inv.explicit_keys.count("images") || inv.explicit_keys.count("offset")) {
    const auto slice = test_slice(c);
    int correct = 0;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      const int p = nn::predict(lm.config, lm.model, slice.images[i]);
      correct += p == slice.labels[i];
      out << "image " << c.offset + static_cast<int>(i) << " label " << slice.labels[i]
          << " predicted " << p << "\n";
    }
    out << "correct " << correct << "/" << slice.size() << "\n";
  }
  out.flush_to(c.out);
  return 0;
}

// ---------------------------------------------------------------- client/server flow

int run_keygen(const Invocation& inv) {
  const auto& c = inv.cfg;
  Report out;
  int t_bits;
  if (c.t_bits == "auto") {
    const auto lm = load_model(inv, false);
    const auto dir = mnist_dir(c);
    require_mnist(dir);
    const auto calib = data::load_mnist_train(dir).head(static_cast<std::size_t>(c.calib_images));
    t_bits = auto_t_bits(lm, c, calib.images, out);
  } else {
    t_bits = parse_t_bits(c.t_bits);
  }
  const auto params = params_for(c, t_bits);
  const auto ctx = she::SheContext::create(params);
  Prng rng(c.seed);
  const auto start = Clock::now();
  const auto keys = she::keygen(ctx, rng);
  const auto kp = key_paths(c);
  std::filesystem::create_directories(c.keys);
  {
    std::ofstream os(kp.params);
    if (!os) throw data_error("cannot write " + kp.params);
    she::write_params(os, params);
  }
  write_file(kp.pk, she::write_public_key, keys.pk);
  write_file(kp.sk, she::write_secret_key, keys.sk);
  write_file(kp.rlk, she::write_relin_keys, keys.rlk);
  out << "preset " << params.name << ": n=" << params.n << ", log2 q=" << params.coeff_modulus_bits()
      << ", t=" << to_mpz(params.t).get_str() << " (" << ctx->t().bit_count() << " bits)\n";
  out << "keys written to " << c.keys << " in " << fmt(seconds_since(start), 2) << " s\n";
  out.flush_to(c.out);
  return 0;
}

int run_encrypt(const Invocation& inv) {
  const auto& c = inv.cfg;
  Report out;
  const auto kp = key_paths(c);
  const auto ctx = load_context(kp);
  const auto pk = read_key<she::PublicKey>(kp.pk, ctx, she::read_public_key);
  const auto slice = test_slice(c);
  const auto fp = fixed_point(c, ctx->params().t);
  Prng rng(c.seed);
  const auto start = Clock::now();
  const auto batch = encinfer::encrypt_batch(pk, slice.images, fp, rng, c.threads);
  const std::string path = c.batch_file.empty() ? "batch.bfb" : c.batch_file;
  encinfer::save_bundle(path, {batch.pixels, batch.batch_size});
  out << "encrypted test images [" << c.offset << ", " << c.offset + c.images << ") into "
      << batch.pixels.size() << " ciphertexts at scale 2^" << c.input_scale_bits << " in "
      << fmt(seconds_since(start), 2) << " s; written to " << path << "\n";
  out.flush_to(c.out);
  return 0;
}

int run_infer(const Invocation& inv, bool static_only) {
  const auto& c = inv.cfg;
  Report out;
  const auto kp = key_paths(c);
  const auto ctx = load_context(kp);
  const auto rlk = read_key<she::RelinKeys>(kp.rlk, ctx, she::read_relin_keys);
  const auto lm = load_model(inv, false);
  const auto net = encoding::QuantizedNetwork::build(lm.config, lm.model, fixed_point(c, ctx->params().t));
  const std::string in_path = c.batch_file.empty() ? "batch.bfb" : c.batch_file;
  const auto bundle = encinfer::load_bundle(in_path, ctx);
  encinfer::EncImageBatch batch{bundle.cts, bundle.batch_size,
                                bundle.cts.empty() ? encoding::Scale(1) : bundle.cts[0].scale()};

  encoding::ShadowResult cert;
  const auto dir = mnist_dir(c);
  if (!static_only && data::mnist_available(dir)) {
    const auto calib = data::load_mnist_train(dir).head(static_cast<std::size_t>(c.calib_images));
    cert = encinfer::calibrate(net, calib.images, c.headroom_bits, c.threads);
    out << "overflow certificate: shadow over " << calib.size() << " calibration images, maximum 2^"
        << bits_of(cert.max_magnitude) << " with " << c.headroom_bits << " bits headroom against t/2 = 2^"
        << fmt(std::log2(to_mpz(ctx->params().t).get_d()) - 1, 1) << "\n";
  } else {
    cert = encinfer::static_bound(net);
    out << "overflow certificate: static interval bound, maximum 2^" << bits_of(cert.max_magnitude)
        << "\n";
  }
  encinfer::InferOptions opt;
  opt.threads = c.threads;
  opt.certificate = &cert;
  const auto r = encinfer::infer_encrypted(net, batch, rlk, opt);
  const std::string path = c.logits.empty() ? "logits.bfb" : c.logits;
  encinfer::save_bundle(path, {r.logits.values, r.logits.batch_size});
  out << encinfer::format_report(r.reports);
  out << "logits for " << r.logits.batch_size << " images written to " << path << "\n";
  out.flush_to(c.out);
  return 0;
}

int run_decrypt(const Invocation& inv, bool with_labels) {
  const auto& c = inv.cfg;
  Report out;
  const auto kp = key_paths(c);
  const auto ctx = load_context(kp);
  const auto sk = read_key<she::SecretKey>(kp.sk, ctx, she::read_secret_key);
  const std::string path = c.logits.empty() ? "logits.bfb" : c.logits;
  const auto bundle = encinfer::load_bundle(path, ctx);
  if (bundle.cts.empty()) throw data_error("logit bundle is empty");
  encinfer::EncLogits logits{bundle.cts, bundle.batch_size, bundle.cts[0].scale()};
  const auto d = encinfer::decrypt_logits(sk, logits);
  if (!d.ok) {
    out << "decryption failed: noise budget exhausted or wrong secret key (budget " << d.min_budget
        << ")\n";
    out.flush_to(c.out);
    return static_cast<int>(ErrorKind::kCrypto);
  }
  data::Dataset labels;
  if (with_labels) {
    RunConfig lc = c;
    lc.images = static_cast<int>(d.predicted.size());
    labels = test_slice(lc);
  }
  int correct = 0;
  for (std::size_t i = 0; i < d.predicted.size(); ++i) {
    std::ostringstream row;
    row << "image " << c.offset + static_cast<int>(i) << " predicted " << d.predicted[i];
    if (with_labels) {
      row << " label " << labels.labels[i];
      correct += labels.labels[i] == d.predicted[i];
    }
    row << " logits";
    for (double v : d.values[i]) row << " " << std::setprecision(6) << v;
    out << row.str() << "\n";
  }
  if (with_labels) out << "correct " << correct << "/" << d.predicted.size() << "\n";
  out << "minimum noise budget " << d.min_budget << " bits\n";
  out.flush_to(c.out);
  return 0;
}

// ---------------------------------------------------------------- bench

int sampled_budget(const she::SecretKey& sk, const encinfer::CtVec& cts) {
  const std::size_t samples = std::min<std::size_t>(16, cts.size());
  int b = 1 << 30;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = samples == 1 ? 0 : i * (cts.size() - 1) / (samples - 1);
    b = std::min(b, she::noise_budget(sk, cts[k]));
  }
  return b;
}

int run_sweep(const RunConfig& c, int reps) {
  Report out;
  out << std::left << std::setw(8) << "preset" << std::right << std::setw(7) << "n" << std::setw(8)
      << "log2 q" << std::setw(8) << "t bits" << std::setw(12) << "keygen(s)" << std::setw(13)
      << "encrypt(ms)" << std::setw(13) << "plain*(ms)" << std::setw(14) << "ct*ct(ms)"
      << std::setw(10) << "fresh NB" << "\n";
  std::vector<double> mult_times;
  for (const auto& name : she::HEParams::preset_names()) {
    const auto params = she::HEParams::preset(name);
    const auto ctx = she::SheContext::create(params);
    Prng rng(c.seed);
    auto start = Clock::now();
    const auto keys = she::keygen(ctx, rng);
    const double t_keygen = seconds_since(start);
    const she::BatchEncoder enc(ctx);
    const auto pt = enc.constant(3);
    start = Clock::now();
    she::Ciphertext ct;
    for (int i = 0; i < reps; ++i) ct = she::encrypt(keys.pk, pt, rng);
    const double t_enc = seconds_since(start) / reps * 1e3;
    start = Clock::now();
    she::Ciphertext sc;
    for (int i = 0; i < reps; ++i) sc = she::eval_mul_scalar(ct, 5);
    const double t_plain = seconds_since(start) / reps * 1e3;
    start = Clock::now();
    she::Ciphertext prod;
    for (int i = 0; i < reps; ++i) prod = she::eval_mul(ct, ct, keys.rlk);
    const double t_mul = seconds_since(start) / reps * 1e3;
    mult_times.push_back(t_mul);
    std::ostringstream row;
    row << std::left << std::setw(8) << name << std::right << std::setw(7) << params.n << std::setw(8)
        << params.coeff_modulus_bits() << std::setw(8) << ctx->t().bit_count() << std::setw(12)
        << fmt(t_keygen, 3) << std::setw(13) << fmt(t_enc, 2) << std::setw(13) << fmt(t_plain, 2)
        << std::setw(14) << fmt(t_mul, 2) << std::setw(10) << she::noise_budget(keys.sk, ct) << "\n";
    out << row.str();
  }
  const bool monotone = std::is_sorted(mult_times.begin(), mult_times.end());
  out << "ciphertext multiplication time increases with n: " << (monotone ? "yes" : "no") << "\n";
  out.flush_to(c.out);
  return 0;
}

struct BenchFlags {
  int degree = 0;
  bool plan_only = false;
  bool force = false;
  bool sweep = false;
  int sweep_reps = 5;
};

int run_bench(const Invocation& inv, const BenchFlags& bf) {
  const auto& c = inv.cfg;
  if (bf.sweep) return run_sweep(c, std::max(1, bf.sweep_reps));
  Report out;
  const auto lm = load_model(inv, true, bf.degree);
  if (!lm.trained) out << "note: no --model given, using untrained weights from seed " << c.seed << "\n";
  const auto slice = test_slice(c);
  const std::string act = lm.config.activations()[0]->activation.to_string();
  out << "network " << lm.config.name << ", activation " << act << ", preset " << c.preset << ", "
      << slice.size() << " test images from offset " << c.offset << "\n";

  const int t_bits = c.t_bits == "auto" ? auto_t_bits(lm, c, slice.images, out) : parse_t_bits(c.t_bits);
  const auto params = params_for(c, t_bits);
  const auto ctx = she::SheContext::create(params);
  out << "parameters: n=" << params.n << ", log2 q=" << params.coeff_modulus_bits() << ", t "
      << ctx->t().bit_count() << " bits, scales 2^" << c.input_scale_bits << " / 2^"
      << c.weight_scale_bits << "\n";
  const auto net = encoding::QuantizedNetwork::build(lm.config, lm.model, fixed_point(c, params.t));
  const auto shadow = encinfer::calibrate(net, slice.images, 0, c.threads);
  out << "shadow maximum 2^" << bits_of(shadow.max_magnitude) << " against t/2 = 2^"
      << fmt(std::log2(to_mpz(params.t).get_d()) - 1, 1) << "\n";
  const auto plan = encinfer::plan_noise(params, net, shadow);
  out << plan.summary();
  const bool doomed = plan.exhausted || plan.overflow;
  if (bf.plan_only) {
    out.flush_to(c.out);
    return doomed ? static_cast<int>(ErrorKind::kCrypto) : 0;
  }
  if (doomed && !bf.force) {
    out << "refusing to run: the planner predicts failure (pass --force to run anyway)\n";
    out.flush_to(c.out);
    return static_cast<int>(ErrorKind::kCrypto);
  }

  Prng rng(c.seed);
  auto start = Clock::now();
  const auto keys = she::keygen(ctx, rng);
  out << "keygen " << fmt(seconds_since(start), 2) << " s\n";

  std::vector<encinfer::LayerReport> reports;
  start = Clock::now();
  const auto batch = encinfer::encrypt_batch(keys.pk, slice.images, net.fp, rng, c.threads);
  encinfer::LayerReport enc_row;
  enc_row.name = "Encryption";
  enc_row.layer = "encryption";
  enc_row.description = std::to_string(batch.pixels.size()) + " pixel ciphertexts, " +
                        std::to_string(batch.batch_size) + " images per ciphertext";
  enc_row.seconds = seconds_since(start);
  enc_row.nb_after = sampled_budget(keys.sk, batch.pixels);
  enc_row.ct_count = batch.pixels.size();
  reports.push_back(enc_row);

  encinfer::InferOptions opt;
  opt.threads = c.threads;
  opt.certificate = &shadow;
  opt.allow_overflow = bf.force;
  opt.probe = [&](const encinfer::CtVec& cts) { return sampled_budget(keys.sk, cts); };
  const auto r = encinfer::infer_encrypted(net, batch, keys.rlk, opt);
  reports.insert(reports.end(), r.reports.begin(), r.reports.end());

  start = Clock::now();
  const auto d = encinfer::decrypt_logits(keys.sk, r.logits);
  encinfer::LayerReport dec_row;
  dec_row.name = "Decryption";
  dec_row.layer = "decryption";
  dec_row.description = std::to_string(r.logits.values.size()) + " logit ciphertexts, argmax per slot";
  dec_row.seconds = seconds_since(start);
  dec_row.nb_before = d.min_budget;
  dec_row.ct_count = r.logits.values.size();
  reports.push_back(dec_row);

  out << encinfer::format_report(reports);
  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw data_error("cannot write " + c.csv);
    f << encinfer::format_report_csv(reports);
  }

  int agree = 0, correct = 0;
  std::ostringstream pred_csv;
  pred_csv << "image,label,plaintext,encrypted\n";
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const int plain = nn::predict(lm.config, lm.model, slice.images[i]);
    const int enc = d.predicted[i];
    agree += plain == enc;
    correct += enc == slice.labels[i];
    pred_csv << c.offset + static_cast<int>(i) << "," << slice.labels[i] << "," << plain << "," << enc
             << "\n";
  }
  if (!c.predictions.empty()) {
    std::ofstream f(c.predictions);
    if (!f) throw data_error("cannot write " + c.predictions);
    f << pred_csv.str();
  }
  out << "agreement with plaintext network: " << agree << "/" << slice.size() << "\n";
  out << "correct labels: " << correct << "/" << slice.size() << "\n";
  out << "final noise budget: " << d.min_budget << " bits"
      << (d.ok ? "" : " (decryption failed)") << "\n";
  out.flush_to(c.out);
  return d.ok ? 0 : static_cast<int>(ErrorKind::kCrypto);
}

const std::vector<std::string> kModelKeys = {"net", "activation", "model", "input_scale_bits",
                                             "weight_scale_bits", "coeff_scale_bits"};

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted CNN inference with a BFV-style somewhat homomorphic scheme"};
  app.require_subcommand(1);

  ApproxArgs approx;
  auto* sc_approx = app.add_subcommand("approx", "fit a Chebyshev approximation and print its error table");
  sc_approx->add_option("--func", approx.func, "relu or sigmoid");
  sc_approx->add_option("--degree", approx.degree, "polynomial degree");
  sc_approx->add_option("--interval", approx.interval, "interval a b")->expected(2);
  sc_approx->add_option("--nodes", approx.nodes, "sample nodes (default degree + 1)");
  sc_approx->add_option("--xs", approx.xs, "table abscissae (default integers inside the interval)");
  sc_approx->add_option("--out", approx.out, "also write the report here");

  const std::vector<std::string> common = {"seed", "threads", "data_dir", "out"};
  FlagSet f_train, f_eval, f_keygen, f_encrypt, f_infer, f_decrypt, f_bench;
  auto* sc_train = app.add_subcommand("train", "train a network on an MNIST split");
  f_train.add(sc_train, join(common, {"net", "activation", "model", "epochs", "lr", "momentum", "batch",
                                      "train_size", "test_size"}));
  auto* sc_eval = app.add_subcommand("eval", "score a model on its held-out split");
  f_eval.add(sc_eval, join(common, {"net", "activation", "model", "train_size", "test_size", "images",
                                    "offset"}));
  auto* sc_keygen = app.add_subcommand("keygen", "generate public, secret and relinearization keys");
  f_keygen.add(sc_keygen, join(join(common, kModelKeys),
                               {"preset", "t_bits", "keys", "headroom_bits", "calib_images"}));
  auto* sc_encrypt = app.add_subcommand("encrypt", "encrypt MNIST test images into slot batches");
  f_encrypt.add(sc_encrypt, join(common, {"keys", "images", "offset", "input_scale_bits", "batch_file"}));
  auto* sc_infer = app.add_subcommand("infer", "evaluate the network on encrypted images (no secret key)");
  f_infer.add(sc_infer, join(join(common, kModelKeys),
                             {"keys", "batch_file", "logits", "headroom_bits", "calib_images"}));
  bool static_only = false;
  sc_infer->add_flag("--static-bound", static_only, "certify overflow freedom by interval bounds only");
  auto* sc_decrypt = app.add_subcommand("decrypt", "decrypt logits and print predicted classes");
  f_decrypt.add(sc_decrypt, join(common, {"keys", "logits", "offset"}));
  bool with_labels = false;
  sc_decrypt->add_flag("--labels", with_labels, "compare with MNIST test labels from --offset");
  auto* sc_bench = app.add_subcommand("bench", "per-layer timing and noise report, or a parameter sweep");
  f_bench.add(sc_bench, join(join(common, kModelKeys),
                             {"preset", "t_bits", "images", "offset", "headroom_bits", "csv",
                              "predictions"}));
  BenchFlags bf;
  sc_bench->add_option("--degree", bf.degree, "override the activation degree");
  sc_bench->add_flag("--plan-only", bf.plan_only, "print the noise plan and stop");
  sc_bench->add_flag("--force", bf.force, "run even when the planner predicts failure");
  sc_bench->add_flag("--sweep", bf.sweep, "micro-benchmark every preset");
  sc_bench->add_option("--sweep-reps", bf.sweep_reps, "repetitions per sweep measurement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::kUsage);
  }

  try {
    if (sc_approx->parsed()) return run_approx(approx);
    const std::vector<std::pair<CLI::App*, FlagSet*>> subs = {
        {sc_train, &f_train},     {sc_eval, &f_eval},   {sc_keygen, &f_keygen}, {sc_encrypt, &f_encrypt},
        {sc_infer, &f_infer},     {sc_decrypt, &f_decrypt}, {sc_bench, &f_bench}};
    for (const auto& [sc, flags] : subs) {
      if (!sc->parsed()) continue;
      const auto inv = flags->resolve();
      if (inv.print_config) {
        std::cout << inv.cfg.to_text();
        return 0;
      }
      if (inv.cfg.threads < 1) throw usage_error("--threads must be at least 1");
      if (sc == sc_train) return run_train(inv);
      if (sc == sc_eval) return run_eval(inv);
      if (sc == sc_keygen) return run_keygen(inv);
      if (sc == sc_encrypt) return run_encrypt(inv);
      if (sc == sc_infer) return run_infer(inv, static_only);
      if (sc == sc_decrypt) return run_decrypt(inv, with_labels);
      if (sc == sc_bench) return run_bench(inv, bf);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
