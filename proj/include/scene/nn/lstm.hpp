#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

#include "scene/nn/layers.hpp"

namespace scene::nn {

template <typename T>
using EVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Stateless LSTM layer over [T x in] sequences. Gates follow the peephole
/// formulation: the input and forget gates read c_{t-1}, the output gate
/// reads c_t, all through diagonal peephole weights. A spec flag disables
/// the peephole terms entirely to emulate common framework cells. Hidden
/// and cell state start at zero on every call.
template <typename T>
class LstmLayer final : public Layer<T> {
 public:
  LstmLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 2) throw std::invalid_argument("lstm expects [T,in] input");
    in_dim_ = in_shape[1];
    units_ = spec_.units;
    for (auto* w : {&wxi_, &wxf_, &wxc_, &wxo_}) *w = TensorT<T>({units_, in_dim_});
    for (auto* w : {&whi_, &whf_, &whc_, &who_}) *w = TensorT<T>({units_, units_});
    for (auto* w : {&wci_, &wcf_, &wco_}) *w = TensorT<T>({units_});
    for (auto* w : {&bi_, &bf_, &bc_, &bo_}) *w = TensorT<T>({units_});
    for (auto* g : {&gwxi_, &gwxf_, &gwxc_, &gwxo_}) *g = TensorT<T>({units_, in_dim_});
    for (auto* g : {&gwhi_, &gwhf_, &gwhc_, &gwho_}) *g = TensorT<T>({units_, units_});
    for (auto* g : {&gwci_, &gwcf_, &gwco_}) *g = TensorT<T>({units_});
    for (auto* g : {&gbi_, &gbf_, &gbc_, &gbo_}) *g = TensorT<T>({units_});
  }

  const LayerSpec& spec() const override { return spec_; }

  void init_params(Rng& rng) override {
    for (auto* w : {&wxi_, &wxf_, &wxc_, &wxo_}) {
      detail::glorot_uniform(*w, in_dim_, units_, rng);
    }
    for (auto* w : {&whi_, &whf_, &whc_, &who_}) {
      detail::glorot_uniform(*w, units_, units_, rng);
    }
    for (auto* w : {&wci_, &wcf_, &wco_}) w->fill(T(0));
    bi_.fill(T(0));
    bf_.fill(T(1));  // open forget gate at start of training
    bc_.fill(T(0));
    bo_.fill(T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef<T>>& out) override {
    out.push_back({prefix + ".Wxi", &wxi_, &gwxi_});
    out.push_back({prefix + ".Wxf", &wxf_, &gwxf_});
    out.push_back({prefix + ".Wxc", &wxc_, &gwxc_});
    out.push_back({prefix + ".Wxo", &wxo_, &gwxo_});
    out.push_back({prefix + ".Whi", &whi_, &gwhi_});
    out.push_back({prefix + ".Whf", &whf_, &gwhf_});
    out.push_back({prefix + ".Whc", &whc_, &gwhc_});
    out.push_back({prefix + ".Who", &who_, &gwho_});
    if (spec_.peepholes) {
      out.push_back({prefix + ".wci", &wci_, &gwci_});
      out.push_back({prefix + ".wcf", &wcf_, &gwcf_});
      out.push_back({prefix + ".wco", &wco_, &gwco_});
    }
    out.push_back({prefix + ".bi", &bi_, &gbi_});
    out.push_back({prefix + ".bf", &bf_, &gbf_});
    out.push_back({prefix + ".bc", &bc_, &gbc_});
    out.push_back({prefix + ".bo", &bo_, &gbo_});
  }

  TensorT<T> forward(const TensorT<T>& x, Mode, Rng*) override {
    if (x.rank() != 2 || x.dim(1) != in_dim_) {
      throw std::invalid_argument("lstm input shape mismatch: got " + shape_to_string(x.shape));
    }
    const int t_len = x.dim(0);
    if (t_len < 1) throw std::invalid_argument("lstm sequence must be non-empty");
    const int u = units_;

    x_ = x;
    is_.resize(t_len, u);
    fs_.resize(t_len, u);
    gs_.resize(t_len, u);
    os_.resize(t_len, u);
    tcs_.resize(t_len, u);
    hs_.resize(t_len + 1, u);
    cs_.resize(t_len + 1, u);
    hs_.row(0).setZero();
    cs_.row(0).setZero();

    CMapM<T> Wxi(wxi_.data.data(), u, in_dim_), Wxf(wxf_.data.data(), u, in_dim_),
        Wxc(wxc_.data.data(), u, in_dim_), Wxo(wxo_.data.data(), u, in_dim_);
    CMapM<T> Whi(whi_.data.data(), u, u), Whf(whf_.data.data(), u, u),
        Whc(whc_.data.data(), u, u), Who(who_.data.data(), u, u);
    Eigen::Map<const EVec<T>> pci(wci_.data.data(), u), pcf(wcf_.data.data(), u),
        pco(wco_.data.data(), u);
    Eigen::Map<const EVec<T>> bi(bi_.data.data(), u), bf(bf_.data.data(), u),
        bc(bc_.data.data(), u), bo(bo_.data.data(), u);

    for (int t = 0; t < t_len; ++t) {
      Eigen::Map<const EVec<T>> xt(x.data.data() + static_cast<std::size_t>(t) * in_dim_,
                                   in_dim_);
      const EVec<T> h_prev = hs_.row(t).transpose();
      const EVec<T> c_prev = cs_.row(t).transpose();

      EVec<T> ai = Wxi * xt + Whi * h_prev + bi;
      EVec<T> af = Wxf * xt + Whf * h_prev + bf;
      EVec<T> ag = Wxc * xt + Whc * h_prev + bc;
      if (spec_.peepholes) {
        ai += pci.cwiseProduct(c_prev);
        af += pcf.cwiseProduct(c_prev);
      }
      const EVec<T> i = sigmoid(ai);
      const EVec<T> f = sigmoid(af);
      const EVec<T> g = ag.array().tanh();
      const EVec<T> c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);

      EVec<T> ao = Wxo * xt + Who * h_prev + bo;
      if (spec_.peepholes) ao += pco.cwiseProduct(c);
      const EVec<T> o = sigmoid(ao);
      const EVec<T> tc = c.array().tanh();
      const EVec<T> h = o.cwiseProduct(tc);

      is_.row(t) = i.transpose();
      fs_.row(t) = f.transpose();
      gs_.row(t) = g.transpose();
      os_.row(t) = o.transpose();
      tcs_.row(t) = tc.transpose();
      cs_.row(t + 1) = c.transpose();
      hs_.row(t + 1) = h.transpose();
    }
    has_cache_ = true;

    if (spec_.return_sequence) {
      TensorT<T> out({t_len, u});
      MapM<T>(out.data.data(), t_len, u) = hs_.bottomRows(t_len);
      return out;
    }
    TensorT<T> out({u});
    Eigen::Map<EVec<T>>(out.data.data(), u) = hs_.row(t_len).transpose();
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    const int t_len = x_.dim(0);
    const int u = units_;
    if (spec_.return_sequence) {
      if (grad_out.rank() != 2 || grad_out.dim(0) != t_len || grad_out.dim(1) != u) {
        throw std::invalid_argument("lstm grad shape mismatch");
      }
    } else if (grad_out.rank() != 1 || grad_out.dim(0) != u) {
      throw std::invalid_argument("lstm grad shape mismatch");
    }

    CMapM<T> Wxi(wxi_.data.data(), u, in_dim_), Wxf(wxf_.data.data(), u, in_dim_),
        Wxc(wxc_.data.data(), u, in_dim_), Wxo(wxo_.data.data(), u, in_dim_);
    CMapM<T> Whi(whi_.data.data(), u, u), Whf(whf_.data.data(), u, u),
        Whc(whc_.data.data(), u, u), Who(who_.data.data(), u, u);
    Eigen::Map<const EVec<T>> pci(wci_.data.data(), u), pcf(wcf_.data.data(), u),
        pco(wco_.data.data(), u);
    MapM<T> gWxi(gwxi_.data.data(), u, in_dim_), gWxf(gwxf_.data.data(), u, in_dim_),
        gWxc(gwxc_.data.data(), u, in_dim_), gWxo(gwxo_.data.data(), u, in_dim_);
    MapM<T> gWhi(gwhi_.data.data(), u, u), gWhf(gwhf_.data.data(), u, u),
        gWhc(gwhc_.data.data(), u, u), gWho(gwho_.data.data(), u, u);
    Eigen::Map<EVec<T>> gpci(gwci_.data.data(), u), gpcf(gwcf_.data.data(), u),
        gpco(gwco_.data.data(), u);
    Eigen::Map<EVec<T>> gbi(gbi_.data.data(), u), gbf(gbf_.data.data(), u),
        gbc(gbc_.data.data(), u), gbo(gbo_.data.data(), u);

    TensorT<T> grad_x({t_len, in_dim_});
    EVec<T> dh_next = EVec<T>::Zero(u);
    EVec<T> dc_next = EVec<T>::Zero(u);

    for (int t = t_len - 1; t >= 0; --t) {
      EVec<T> dh = dh_next;
      if (spec_.return_sequence) {
        dh += Eigen::Map<const EVec<T>>(
            grad_out.data.data() + static_cast<std::size_t>(t) * u, u);
      } else if (t == t_len - 1) {
        dh += Eigen::Map<const EVec<T>>(grad_out.data.data(), u);
      }

      const EVec<T> i = is_.row(t).transpose();
      const EVec<T> f = fs_.row(t).transpose();
      const EVec<T> g = gs_.row(t).transpose();
      const EVec<T> o = os_.row(t).transpose();
      const EVec<T> tc = tcs_.row(t).transpose();
      const EVec<T> c = cs_.row(t + 1).transpose();
      const EVec<T> c_prev = cs_.row(t).transpose();
      const EVec<T> h_prev = hs_.row(t).transpose();
      Eigen::Map<const EVec<T>> xt(x_.data.data() + static_cast<std::size_t>(t) * in_dim_,
                                   in_dim_);

      const EVec<T> do_ = dh.cwiseProduct(tc);
      const EVec<T> dao = do_.cwiseProduct(o).cwiseProduct(EVec<T>::Ones(u) - o);

      EVec<T> dc = dh.cwiseProduct(o).cwiseProduct(
                       (EVec<T>::Ones(u) - tc.cwiseProduct(tc))) +
                   dc_next;
      if (spec_.peepholes) dc += pco.cwiseProduct(dao);

      const EVec<T> di = dc.cwiseProduct(g);
      const EVec<T> dai = di.cwiseProduct(i).cwiseProduct(EVec<T>::Ones(u) - i);
      const EVec<T> df = dc.cwiseProduct(c_prev);
      const EVec<T> daf = df.cwiseProduct(f).cwiseProduct(EVec<T>::Ones(u) - f);
      const EVec<T> dg = dc.cwiseProduct(i);
      const EVec<T> dag = dg.cwiseProduct(EVec<T>::Ones(u) - g.cwiseProduct(g));

      gWxi.noalias() += dai * xt.transpose();
      gWxf.noalias() += daf * xt.transpose();
      gWxc.noalias() += dag * xt.transpose();
      gWxo.noalias() += dao * xt.transpose();
      gWhi.noalias() += dai * h_prev.transpose();
      gWhf.noalias() += daf * h_prev.transpose();
      gWhc.noalias() += dag * h_prev.transpose();
      gWho.noalias() += dao * h_prev.transpose();
      if (spec_.peepholes) {
        gpci += dai.cwiseProduct(c_prev);
        gpcf += daf.cwiseProduct(c_prev);
        gpco += dao.cwiseProduct(c);
      }
      gbi += dai;
      gbf += daf;
      gbc += dag;
      gbo += dao;

      Eigen::Map<EVec<T>> dxt(grad_x.data.data() + static_cast<std::size_t>(t) * in_dim_,
                              in_dim_);
      dxt.noalias() = Wxi.transpose() * dai + Wxf.transpose() * daf +
                      Wxc.transpose() * dag + Wxo.transpose() * dao;

      dh_next.noalias() = Whi.transpose() * dai + Whf.transpose() * daf +
                          Whc.transpose() * dag + Who.transpose() * dao;
      dc_next = dc.cwiseProduct(f);
      if (spec_.peepholes) {
        dc_next += pci.cwiseProduct(dai) + pcf.cwiseProduct(daf);
      }
    }
    return grad_x;
  }

 private:
  static EVec<T> sigmoid(const EVec<T>& v) {
    return ((-v.array()).exp() + T(1)).inverse().matrix();
  }

  LayerSpec spec_;
  int in_dim_ = 0;
  int units_ = 0;
  TensorT<T> wxi_, wxf_, wxc_, wxo_;
  TensorT<T> whi_, whf_, whc_, who_;
  TensorT<T> wci_, wcf_, wco_;
  TensorT<T> bi_, bf_, bc_, bo_;
  TensorT<T> gwxi_, gwxf_, gwxc_, gwxo_;
  TensorT<T> gwhi_, gwhf_, gwhc_, gwho_;
  TensorT<T> gwci_, gwcf_, gwco_;
  TensorT<T> gbi_, gbf_, gbc_, gbo_;
  // per-step caches
  TensorT<T> x_;
  EMat<T> is_, fs_, gs_, os_, tcs_, hs_, cs_;
  bool has_cache_ = false;
};

}  // namespace scene::nn
