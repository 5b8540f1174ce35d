from django.urls import path
from . import views

urlpatterns = [
    path('fit/', views.FitView.as_view(), name='fit-curve'),
    path('runs/', views.FitRunListView.as_view(), name='fit-run-list'),
]
